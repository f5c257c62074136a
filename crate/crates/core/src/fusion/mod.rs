//! Level-ℓ fusion ring of `sl_r`.
//!
//! Dominant integral weights are encoded as partitions with exactly `r - 1`
//! parts (trailing zeros kept). The classical tensor product is computed in
//! [`lr`], the level truncation in [`kac_walton`], and [`table`] memoizes the
//! resulting three-point ranks.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub mod kac_walton;
pub mod lr;
pub mod table;

pub use kac_walton::{fuse, fusion_product};
pub use lr::{lr_coefficient, lr_product};
pub use table::{FusionTable, TableStats};

/// A dominant integral `sl_r` weight, stored as a weakly decreasing partition
/// with exactly `r - 1` parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightPartition {
    parts: Vec<u32>,
}

impl WeightPartition {
    /// Builds a weight for `sl_rank`. `parts` may be shorter than `rank - 1`;
    /// missing trailing parts are zero.
    pub fn new(rank: usize, parts: &[u32]) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidWeight(format!("rank must be at least 2, got {rank}")));
        }
        if parts.len() > rank - 1 {
            // Allow explicit trailing zeros beyond r - 1 (a full GL_r row of zero).
            if parts[rank - 1..].iter().any(|&p| p != 0) {
                return Err(Error::InvalidWeight(format!("{parts:?} has more than {} nonzero rows", rank - 1)));
            }
        }
        let mut padded: Vec<u32> = parts.iter().copied().take(rank - 1).collect();
        padded.resize(rank - 1, 0);
        if padded.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidWeight(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts: padded })
    }

    /// The trivial weight of `sl_rank`.
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 2, "rank must be at least 2");
        Self { parts: alloc::vec![0; rank - 1] }
    }

    pub fn rank(&self) -> usize {
        self.parts.len() + 1
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `(λ, θ)`, the pairing with the highest root; equals the first part.
    pub fn theta_pairing(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `|λ|`, the number of boxes.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    /// Dynkin labels `λ_j - λ_{j+1}` for `j = 1..r-1` (with `λ_r = 0`).
    pub fn dynkin_labels(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.parts.len());
        for j in 0..self.parts.len() {
            let next = self.parts.get(j + 1).copied().unwrap_or(0);
            out.push(self.parts[j] - next);
        }
        out
    }

    /// Inverse of [`dynkin_labels`](Self::dynkin_labels).
    pub fn from_dynkin_labels(rank: usize, labels: &[u32]) -> Result<Self> {
        if labels.len() != rank.saturating_sub(1) {
            return Err(Error::InvalidWeight(format!(
                "expected {} Dynkin labels, got {}",
                rank.saturating_sub(1),
                labels.len()
            )));
        }
        let mut parts = alloc::vec![0u32; labels.len()];
        let mut acc = 0u32;
        for j in (0..labels.len()).rev() {
            acc += labels[j];
            parts[j] = acc;
        }
        Self::new(rank, &parts)
    }

    /// The dual weight `λ*_j = λ_1 - λ_{r+1-j}` (`λ_r = 0`).
    pub fn dual(&self) -> Self {
        let r = self.rank();
        let first = self.theta_pairing();
        let at = |i: usize| -> u32 {
            // 1-based index into the r-row partition.
            if i >= r {
                0
            } else {
                self.parts[i - 1]
            }
        };
        let parts = (1..r).map(|j| first - at(r + 1 - j)).collect();
        Self { parts }
    }

    /// Componentwise sum, the weight of `V_λ ⊗ V_μ`'s top summand.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect();
        Ok(Self { parts })
    }

    /// `m·λ`.
    pub fn scale(&self, m: u32) -> Self {
        Self { parts: self.parts.iter().map(|p| p * m).collect() }
    }

    /// The weight as an `r`-row GL partition (last row zero).
    pub(crate) fn gl_row(&self) -> Vec<i64> {
        let mut row: Vec<i64> = self.parts.iter().map(|&p| p as i64).collect();
        row.push(0);
        row
    }

    /// Strips full columns from an `r`-row GL partition.
    pub(crate) fn from_gl_row(row: &[i64]) -> Self {
        let last = *row.last().expect("nonempty row");
        let parts = row[..row.len() - 1].iter().map(|&p| (p - last) as u32).collect();
        Self { parts }
    }
}

impl fmt::Debug for WeightPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Rank and level of the affine algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelContext {
    pub rank: usize,
    pub level: u32,
}

impl LevelContext {
    pub fn new(rank: usize, level: u32) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidWeight(format!("rank must be at least 2, got {rank}")));
        }
        Ok(Self { rank, level })
    }

    /// Checks that `w` is an `sl_r` weight with `(w, θ) ≤ ℓ`.
    pub fn check(&self, w: &WeightPartition) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: w.rank() });
        }
        if w.theta_pairing() > self.level {
            return Err(Error::LevelViolation { weight: format!("{w}"), level: self.level });
        }
        Ok(())
    }

    /// `|P_ℓ| = C(ℓ + r - 1, r - 1)`.
    pub fn weight_count(&self) -> usize {
        let n = self.level as usize + self.rank - 1;
        let k = self.rank - 1;
        let mut acc: usize = 1;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }
}

/// Every weight with `λ_1 ≤ ℓ`, in lexicographic order.
pub fn weights_at_level(ctx: LevelContext) -> Vec<WeightPartition> {
    let len = ctx.rank - 1;
    let mut out = Vec::with_capacity(ctx.weight_count());
    let mut current = Vec::with_capacity(len);
    fill(len, ctx.level, &mut current, &mut out);
    out.sort();
    out
}

fn fill(len: usize, max: u32, current: &mut Vec<u32>, out: &mut Vec<WeightPartition>) {
    if current.len() == len {
        out.push(WeightPartition { parts: current.clone() });
        return;
    }
    for p in 0..=max {
        current.push(p);
        fill(len, p, current, out);
        current.pop();
    }
}

/// Dual weight; see [`WeightPartition::dual`].
pub fn dual(weight: &WeightPartition) -> WeightPartition {
    weight.dual()
}
