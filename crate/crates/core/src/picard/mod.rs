//! The Picard lattice `Z^{(r-1)n+1}` with coordinates `(ℓ, d_j^i)`, the
//! cone `E`, projective models and graded pieces along weight rays.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fusion::WeightPartition;
use crate::weights::{ParabolicWeight, Q};

mod hilbert;
mod lattice;

pub use hilbert::{flatness_check, hilbert_function};
pub use lattice::{ray_generator, subgroup_for_weight, subgroup_k_nodal, LatticeSubgroup, NodeEnd};

/// `L^ℓ ⊗ ⊗_{i,j} F_{i,ω_j}^{d_j^i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    rank: usize,
    level: i64,
    d: Vec<Vec<i64>>,
}

impl DivisorClass {
    pub fn new(rank: usize, level: i64, d: Vec<Vec<i64>>) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidWeight(format!("rank must be at least 2, got {rank}")));
        }
        if let Some((i, row)) = d.iter().enumerate().find(|(_, row)| row.len() != rank - 1) {
            return Err(Error::InvalidWeight(format!(
                "point {} has {} coefficients, expected {}",
                i + 1,
                row.len(),
                rank - 1
            )));
        }
        Ok(Self { rank, level, d })
    }

    pub fn zero(rank: usize, n: usize) -> Self {
        Self { rank, level: 0, d: alloc::vec![alloc::vec![0; rank - 1]; n] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn d(&self) -> &[Vec<i64>] {
        &self.d
    }

    /// `(ℓ, d_1^1, ..., d_{r-1}^1, d_1^2, ...)`.
    pub fn coords(&self) -> Vec<i64> {
        core::iter::once(self.level).chain(self.d.iter().flatten().copied()).collect()
    }

    pub fn from_coords(rank: usize, coords: &[i64]) -> Result<Self> {
        if rank < 2 || coords.is_empty() || !(coords.len() - 1).is_multiple_of(rank - 1) {
            return Err(Error::InvalidWeight(format!("{} coordinates do not fit rank {rank}", coords.len())));
        }
        Self::new(rank, coords[0], coords[1..].chunks(rank - 1).map(|c| c.to_vec()).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank || self.n() != other.n() {
            return Err(Error::MismatchedType(format!(
                "rank {} with {} points vs rank {} with {} points",
                self.rank,
                self.n(),
                other.rank,
                other.n()
            )));
        }
        let d = self.d.iter().zip(&other.d).map(|(x, y)| x.iter().zip(y).map(|(a, b)| a + b).collect()).collect();
        Ok(Self { rank: self.rank, level: self.level + other.level, d })
    }

    pub fn scale(&self, m: i64) -> Self {
        Self {
            rank: self.rank,
            level: self.level * m,
            d: self.d.iter().map(|row| row.iter().map(|x| x * m).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.d.iter().flatten().all(|&x| x == 0)
    }
}

/// Level and per-point partial sums `λ_j^i = Σ_{k≥j} d_k^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWeights {
    pub level: i64,
    pub lambdas: Vec<Vec<i64>>,
}

impl LevelWeights {
    /// Level and every `λ_j^i` nonnegative, with `λ` weakly decreasing.
    pub fn is_dominant(&self) -> bool {
        self.level >= 0
            && self.lambdas.iter().all(|l| l.windows(2).all(|w| w[0] >= w[1]) && l.last().is_none_or(|&x| x >= 0))
    }

    pub fn to_partitions(&self, rank: usize) -> Result<(u32, Vec<WeightPartition>)> {
        if !self.is_dominant() {
            return Err(Error::InvalidWeight(format!("non-dominant data {:?} at level {}", self.lambdas, self.level)));
        }
        let level = u32::try_from(self.level).map_err(|_| Error::InvalidWeight(format!("level {}", self.level)))?;
        let ws = self
            .lambdas
            .iter()
            .map(|l| {
                let parts = l
                    .iter()
                    .map(|&x| u32::try_from(x).map_err(|_| Error::InvalidWeight(format!("part {x}"))))
                    .collect::<Result<Vec<u32>>>()?;
                WeightPartition::new(rank, &parts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((level, ws))
    }
}

pub fn divisor_to_level_weights(div: &DivisorClass) -> LevelWeights {
    let lambdas = div
        .d
        .iter()
        .map(|row| {
            let mut acc = 0;
            let mut out: Vec<i64> = row
                .iter()
                .rev()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect();
            out.reverse();
            out
        })
        .collect();
    LevelWeights { level: div.level, lambdas }
}

/// `d_j^i = λ_j^i - λ_{j+1}^i`.
pub fn from_level_weights(rank: usize, level: u32, weights: &[WeightPartition]) -> Result<DivisorClass> {
    let mut d = Vec::with_capacity(weights.len());
    for w in weights {
        if w.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, found: w.rank() });
        }
        d.push(w.dynkin_labels().iter().map(|&x| i64::from(x)).collect());
    }
    DivisorClass::new(rank, i64::from(level), d)
}

/// `r | Σ_i |λ^i| = Σ_i Σ_j j·d_j^i`.
pub fn descends(div: &DivisorClass) -> bool {
    let total: i64 = div.d.iter().map(|row| row.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum::<i64>()).sum();
    total.rem_euclid(div.rank as i64) == 0
}

/// Index in the full lattice of the classes that descend: the residues
/// `j·d_j^i mod r` of the generators span `Z/r` as soon as there is a point.
pub fn descent_index(rank: usize, n: usize) -> usize {
    if n == 0 {
        1
    } else {
        rank
    }
}

/// `ℓ = 2r` and `d_j^i = 2`, i.e. `λ = 2ρ` at every point.
pub fn anticanonical_class(rank: usize, n: usize) -> DivisorClass {
    DivisorClass { rank, level: 2 * rank as i64, d: alloc::vec![alloc::vec![2; rank - 1]; n] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConePosition {
    Outside,
    Boundary,
    Interior,
}

/// Position relative to `E`: `ℓ ≥ 0`, `d_j^i ≥ 0`, `Σ_j d_j^i ≤ ℓ`.
pub fn in_cone_e(div: &DivisorClass) -> ConePosition {
    let mut slack: Vec<i64> = Vec::with_capacity(1 + div.d.len() * div.rank);
    slack.push(div.level);
    for row in &div.d {
        slack.extend(row.iter().copied());
        slack.push(div.level - row.iter().sum::<i64>());
    }
    if slack.iter().any(|&s| s < 0) {
        ConePosition::Outside
    } else if slack.contains(&0) {
        ConePosition::Boundary
    } else {
        ConePosition::Interior
    }
}

fn divide(lambdas: &[i64], level: i64) -> Vec<Q> {
    lambdas.iter().map(|&x| Q::new(BigInt::from(x), BigInt::from(level))).collect()
}

/// `b_j^i = λ_j^i / ℓ`. Zero coefficients `d_j^i` are allowed and produce a
/// partial flag; `λ_1^i = ℓ` at some point or `ℓ = 0` is not big.
pub fn projective_model_weight(div: &DivisorClass) -> Result<ParabolicWeight> {
    if in_cone_e(div) == ConePosition::Outside {
        return Err(Error::NotBig(format!("{:?} lies outside E", div.coords())));
    }
    if div.level == 0 || div.d.iter().any(|row| row.iter().sum::<i64>() == div.level) {
        return Err(Error::NotBig(format!("{:?} lies on a facet of E with no weight model", div.coords())));
    }
    let lw = divisor_to_level_weights(div);
    ParabolicWeight::new_partial(div.rank, lw.lambdas.iter().map(|l| divide(l, div.level)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Facet {
    /// `D = 0`.
    Apex,
    /// `ℓ = 0`.
    LevelZero,
    /// `d_step^point = 0`: that step of the flag is forgotten.
    FlagStep { point: usize, step: usize },
    /// `Σ_j d_j^point = ℓ`.
    FullColumn { point: usize },
}

/// Model attached to a divisor on the boundary of `E`.
///
/// For every full column `k` the determinant is twisted by `O(-p^k)` and the
/// weight at `k` becomes `(λ_j^k - λ_{r-1}^k) / ℓ` for `j ≤ r - 2`. Other
/// points keep `λ^i / ℓ`. The extension step that moves the weight a small
/// amount into the interior is left symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryModel {
    pub facets: Vec<Facet>,
    pub twists: Vec<usize>,
    /// Per point, a weakly decreasing sequence (length `r - 2` at twisted
    /// points, `r - 1` elsewhere). Empty at the apex and on `ℓ = 0`.
    pub weight: Vec<Vec<Q>>,
}

pub fn boundary_model_descriptor(div: &DivisorClass) -> Result<BoundaryModel> {
    if in_cone_e(div) != ConePosition::Boundary {
        return Err(Error::NotOnBoundary);
    }
    if div.is_zero() {
        return Ok(BoundaryModel { facets: alloc::vec![Facet::Apex], twists: Vec::new(), weight: Vec::new() });
    }
    if div.level == 0 {
        // inside E, ℓ = 0 forces d = 0
        return Err(Error::InvariantBreach(format!("{:?} on ℓ = 0 but nonzero", div.coords())));
    }
    let lw = divisor_to_level_weights(div);
    let mut facets = Vec::new();
    let mut twists = Vec::new();
    let mut weight = Vec::with_capacity(div.n());
    for (i, (row, lam)) in div.d.iter().zip(&lw.lambdas).enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x == 0 {
                facets.push(Facet::FlagStep { point: i + 1, step: j + 1 });
            }
        }
        if row.iter().sum::<i64>() == div.level {
            facets.push(Facet::FullColumn { point: i + 1 });
            twists.push(i + 1);
            let last = lam[div.rank - 2];
            let shifted: Vec<i64> = lam[..div.rank - 2].iter().map(|x| x - last).collect();
            weight.push(divide(&shifted, div.level));
        } else {
            weight.push(divide(lam, div.level));
        }
    }
    facets.sort();
    Ok(BoundaryModel { facets, twists, weight })
}
