use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::walls::{ac_radius, combinations, is_general};
use super::{check_subsets, weight_ac, ParabolicWeight, Q};
use crate::error::{Error, Result};

/// Numerical type of a maximal destabilizing subbundle: rank `r1`, degree
/// `d1` and flag positions `subsets` (each of size `r1`, 1-based, increasing).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DestabilizingDatum {
    pub r1: usize,
    pub d1: i64,
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dominance {
    /// Certified by a general statement; the string names the bound used.
    YesByTheorem(String),
    /// Every destabilizing datum has bound at least 2; `datum` attains the
    /// minimum `bound`.
    Yes { datum: DestabilizingDatum, bound: Q },
    /// The smallest lower bound is below 2. The true codimension may still
    /// be larger.
    Inconclusive { datum: DestabilizingDatum, bound: Q },
}

fn qi(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// `Σ_i (r1 Σ_{j<r} a_j^i - r Σ_{j∈J^i} a_j^i)`.
fn slope_excess(a: &ParabolicWeight, r1: usize, subsets: &[Vec<usize>]) -> Q {
    let r = a.rank();
    let mut out = Q::zero();
    for (i, js) in subsets.iter().enumerate() {
        for j in 1..r {
            out += qi(r1 as i64) * a.get(i + 1, j);
        }
        for &j in js {
            out -= qi(r as i64) * a.get(i + 1, j);
        }
    }
    out
}

fn schubert(r: usize, r1: usize, js: &[usize]) -> i64 {
    js.iter().enumerate().map(|(k, &j)| r as i64 - r1 as i64 - j as i64 + (k + 1) as i64).sum()
}

fn check_datum(r: usize, n: usize, r1: usize, subsets: &[Vec<usize>]) -> Result<()> {
    if r1 == 0 || r1 >= r {
        return Err(Error::MalformedSubsets(format!("subbundle rank {r1} outside 1..{}", r - 1)));
    }
    check_subsets(r, n, subsets, Some(r1)).map(|_| ())
}

/// Lower bound `r1 r2 (g-1) + Σ_i Σ_j (r - r1 - J_j^i + j) + r d1` for the
/// codimension of the bundles destabilized by `datum`.
pub fn codim_lower_bound(g: u32, a: &ParabolicWeight, datum: &DestabilizingDatum) -> Result<Q> {
    let (r, n) = (a.rank(), a.n());
    check_datum(r, n, datum.r1, &datum.subsets)?;
    let excess = slope_excess(a, datum.r1, &datum.subsets);
    let rd = qi(r as i64 * datum.d1);
    if rd <= excess {
        return Err(Error::NotDestabilizing(format!("r·d1 = {rd} does not exceed {excess}")));
    }
    let r1 = datum.r1 as i64;
    let r2 = (r - datum.r1) as i64;
    let schub: i64 = datum.subsets.iter().map(|js| schubert(r, datum.r1, js)).sum();
    Ok(qi(r1 * r2 * (i64::from(g) - 1) + schub) + rd)
}

/// Smallest `d1` satisfying the destabilizing inequality for `(r1, J)`.
pub fn minimal_d1(a: &ParabolicWeight, r1: usize, subsets: &[Vec<usize>]) -> Result<i64> {
    check_datum(a.rank(), a.n(), r1, subsets)?;
    let bound = slope_excess(a, r1, subsets) / qi(a.rank() as i64);
    let floor = bound.numer().div_floor(bound.denom());
    i64::try_from(floor + 1).map_err(|_| Error::InvariantBreach(String::from("d1 out of i64 range")))
}

fn subset_tuples(r: usize, r1: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let choices = combinations(r, r1);
    let mut out = Vec::with_capacity(choices.len().pow(n as u32));
    for t in 0..choices.len().pow(n as u32) {
        let mut rest = t;
        let mut js: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for slot in js.iter_mut().rev() {
            *slot = choices[rest % choices.len()].clone();
            rest /= choices.len();
        }
        out.push(js);
    }
    out
}

/// Every datum with `d1` in `d1s` that satisfies the destabilizing
/// inequality for `a`.
pub fn destabilizing_data(a: &ParabolicWeight, d1s: RangeInclusive<i64>) -> Vec<DestabilizingDatum> {
    let (r, n) = (a.rank(), a.n());
    let mut out = Vec::new();
    for r1 in 1..r {
        for subsets in subset_tuples(r, r1, n) {
            let lo = minimal_d1(a, r1, &subsets).expect("well-formed tuple");
            for d1 in lo.max(*d1s.start())..=*d1s.end() {
                out.push(DestabilizingDatum { r1, d1, subsets: subsets.clone() });
            }
        }
    }
    out
}

fn linf(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(Q::zero(), |m, d| if d > m { d } else { m })
}

/// Whether the unstable locus has codimension at least 2.
///
/// The bound is monotone in `d1`, so the minimization takes the smallest
/// admissible `d1` for each `(r1, J)`.
pub fn is_dominant(g: u32, a: &ParabolicWeight) -> Result<Dominance> {
    if !is_general(a) {
        return Err(Error::NonGeneral);
    }
    let (r, n) = (a.rank(), a.n());
    if g >= 2 {
        return Ok(Dominance::YesByTheorem(String::from("(r-1)(g-1)+1")));
    }
    if g == 1 && n > r {
        let near = match ac_radius(r, n) {
            Some(rad) => linf(&a.flat(), &weight_ac(r, n).flat()) < rad,
            None => true,
        };
        if near {
            return Ok(Dominance::YesByTheorem(String::from("g = 1, n > r, near a_c")));
        }
    }
    let mut best: Option<(Q, DestabilizingDatum)> = None;
    for r1 in 1..r {
        for subsets in subset_tuples(r, r1, n) {
            let d1 = minimal_d1(a, r1, &subsets)?;
            let datum = DestabilizingDatum { r1, d1, subsets };
            let bound = codim_lower_bound(g, a, &datum)?;
            if best.as_ref().is_none_or(|(b, _)| bound < *b) {
                best = Some((bound, datum));
            }
        }
    }
    let (bound, datum) = best.expect("r >= 2 gives at least one datum");
    Ok(if bound >= qi(2) { Dominance::Yes { datum, bound } } else { Dominance::Inconclusive { datum, bound } })
}

/// Nonemptiness of the semistable locus. Known for every weight when
/// `g >= 1`; genus 0 is not handled.
pub fn is_effective(g: u32, a: &ParabolicWeight) -> Result<bool> {
    let _ = a;
    if g == 0 {
        return Err(Error::OutOfScope("effectivity of genus 0 weights"));
    }
    Ok(true)
}
