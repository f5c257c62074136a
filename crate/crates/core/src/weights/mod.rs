//! Parabolic weights, walls and chambers, and the codimension estimate for
//! the unstable locus. All arithmetic is exact.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod chambers;
mod codim;
mod walls;

pub use chambers::{chamber_adjacency, count_chambers, enumerate_chambers, Chamber};
pub use codim::{
    codim_lower_bound, destabilizing_data, is_dominant, is_effective, minimal_d1, DestabilizingDatum, Dominance,
};
pub use walls::{ac_radius, enumerate_walls, is_general, sign_vector, wall_residual, Wall, WallSpec};

pub type Q = BigRational;

pub(crate) fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Weights `a_1^i > ... > a_{r-1}^i` at each marked point; `a_r^i = 0` is
/// implicit.
///
/// A partial weight allows ties (a coarser flag) and a zero last entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicWeight {
    rank: usize,
    points: Vec<Vec<Q>>,
    partial: bool,
}

impl ParabolicWeight {
    /// A full-flag weight: `1 > a_1 > ... > a_{r-1} > 0` at every point.
    pub fn new(rank: usize, points: Vec<Vec<Q>>) -> Result<Self> {
        Self::build(rank, points, false)
    }

    /// A partial-flag weight: `1 > a_1 ≥ ... ≥ a_{r-1} ≥ 0`.
    pub fn new_partial(rank: usize, points: Vec<Vec<Q>>) -> Result<Self> {
        Self::build(rank, points, true)
    }

    fn build(rank: usize, points: Vec<Vec<Q>>, partial: bool) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidWeight(format!("rank must be at least 2, got {rank}")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != rank - 1 {
                return Err(Error::InvalidWeight(format!(
                    "point {} has {} entries, expected {}",
                    i + 1,
                    p.len(),
                    rank - 1
                )));
            }
            if p[0] >= Q::one() {
                return Err(Error::InvalidWeight(format!("point {}: a_1 must be below 1", i + 1)));
            }
            let last = &p[rank - 2];
            if last.is_negative() || (!partial && last.is_zero()) {
                return Err(Error::InvalidWeight(format!("point {}: a_{} out of range", i + 1, rank - 1)));
            }
            for j in 0..rank.saturating_sub(2) {
                let bad = if partial { p[j] < p[j + 1] } else { p[j] <= p[j + 1] };
                if bad {
                    return Err(Error::InvalidWeight(format!(
                        "point {}: entries must be {} decreasing",
                        i + 1,
                        if partial { "weakly" } else { "strictly" }
                    )));
                }
            }
        }
        Ok(Self { rank, points, partial })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    /// `a_j^i` with 1-based `i`, `j`; `a_r^i = 0`.
    pub fn get(&self, i: usize, j: usize) -> Q {
        if j == self.rank {
            Q::zero()
        } else {
            self.points[i - 1][j - 1].clone()
        }
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    /// Whether every flag is full: all entries strictly decrease to a
    /// positive last entry.
    pub fn is_full_flag(&self) -> bool {
        self.degeneracies().iter().all(|d| d.iter().all(|&x| !x))
    }

    /// `[i][j]` is true when `a_{j+1} = a_{j+2}` at point `i + 1` (with
    /// `a_r = 0`), i.e. flag step `j + 1` is dropped.
    pub fn degeneracies(&self) -> Vec<Vec<bool>> {
        self.points
            .iter()
            .map(|p| {
                (0..self.rank - 1).map(|j| if j + 1 < p.len() { p[j] == p[j + 1] } else { p[j].is_zero() }).collect()
            })
            .collect()
    }

    /// All coordinates, point by point.
    pub fn flat(&self) -> Vec<Q> {
        self.points.iter().flatten().cloned().collect()
    }

    pub fn from_flat(rank: usize, coords: &[Q]) -> Result<Self> {
        if rank < 2 || !coords.len().is_multiple_of(rank - 1) {
            return Err(Error::InvalidWeight(format!("{} coordinates do not fit rank {rank}", coords.len())));
        }
        Self::new(rank, coords.chunks(rank - 1).map(|c| c.to_vec()).collect())
    }

    /// `Σ_i Σ_j a_j^i`.
    pub fn total(&self) -> Q {
        self.points.iter().flatten().fold(Q::zero(), |acc, x| acc + x)
    }

    /// Largest ε such that the open ℓ∞ ball of radius ε stays in the open
    /// weight polytope.
    pub fn boundary_distance(&self) -> Q {
        let two = q(2, 1);
        let mut best: Option<Q> = None;
        let mut take = |x: Q| {
            if best.as_ref().is_none_or(|b| x < *b) {
                best = Some(x);
            }
        };
        for p in &self.points {
            take(Q::one() - &p[0]);
            for j in 0..p.len() - 1 {
                take((&p[j] - &p[j + 1]) / &two);
            }
            take(p[p.len() - 1].clone());
        }
        best.unwrap_or_else(Q::one)
    }
}

/// Parabolic degree `deg + Σ a`.
pub fn pdeg(deg: i64, a: &ParabolicWeight) -> Q {
    Q::from_integer(BigInt::from(deg)) + a.total()
}

/// Parabolic slope `pdeg / r`.
pub fn slope(deg: i64, a: &ParabolicWeight) -> Q {
    pdeg(deg, a) / Q::from_integer(BigInt::from(a.rank() as i64))
}

/// Induced weights on a subbundle whose flag meets the given positions:
/// `b_j^i = a_{J_j^i}^i`. Each point's sequence has length `|J^i|` and may
/// end in a nonzero entry.
pub fn induced_weight(a: &ParabolicWeight, subsets: &[Vec<usize>]) -> Result<Vec<Vec<Q>>> {
    check_subsets(a.rank(), a.n(), subsets, None)?;
    Ok(subsets.iter().enumerate().map(|(i, js)| js.iter().map(|&j| a.get(i + 1, j)).collect()).collect())
}

/// Validates `n` subsets of `{1..r}` of common size (or of size `want`).
/// Subsets are expected in increasing order. Returns the common size.
pub(crate) fn check_subsets(r: usize, n: usize, subsets: &[Vec<usize>], want: Option<usize>) -> Result<usize> {
    if subsets.len() != n {
        return Err(Error::MalformedSubsets(format!("expected {n} subsets, got {}", subsets.len())));
    }
    let size = want.or_else(|| subsets.first().map(|s| s.len())).unwrap_or(0);
    for (i, s) in subsets.iter().enumerate() {
        if s.len() != size {
            return Err(Error::MalformedSubsets(format!("subset {} has size {}, expected {size}", i + 1, s.len())));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSubsets(format!("subset {} is not strictly increasing", i + 1)));
        }
        if s.iter().any(|&j| j == 0 || j > r) {
            return Err(Error::MalformedSubsets(format!("subset {} leaves 1..{r}", i + 1)));
        }
    }
    Ok(size)
}

/// The central weight: `(r-1, r-2, ..., 1) / r` at every point.
pub fn weight_ac(r: usize, n: usize) -> ParabolicWeight {
    let point: Vec<Q> = (1..r).rev().map(|j| q(j as i64, r as i64)).collect();
    ParabolicWeight::new(r, alloc::vec![point; n]).expect("central weight is valid")
}

pub(crate) fn nth_primes(count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2i64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Moves `a` off every wall: coordinate `k` is raised by `ε / p_k` with
/// `p_k` the `k`-th prime. If that lands on a wall, ε is halved and the step
/// repeated.
pub fn perturb_general(a: &ParabolicWeight, eps: &Q) -> Result<ParabolicWeight> {
    if !eps.is_positive() {
        return Err(Error::CannotPerturb(format!("ε = {eps} is not positive")));
    }
    let room = a.boundary_distance();
    if *eps >= room {
        return Err(Error::CannotPerturb(format!("ε = {eps} is not below the distance {room} to the boundary")));
    }
    let walls = enumerate_walls(a.rank(), a.n());
    let base = a.flat();
    let primes = nth_primes(base.len());
    let mut e = eps.clone();
    for _ in 0..64 {
        let coords: Vec<Q> = base.iter().zip(&primes).map(|(x, &p)| x + &e / q(p, 1)).collect();
        let b = ParabolicWeight::from_flat(a.rank(), &coords).map_err(|err| Error::CannotPerturb(format!("{err}")))?;
        if walls.iter().all(|w| !wall_residual(&b, &w.spec).is_zero()) {
            return Ok(b);
        }
        e /= q(2, 1);
    }
    Err(Error::CannotPerturb(String::from("no general point found along the perturbation ray")))
}
