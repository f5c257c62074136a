use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::walls::{enumerate_walls, Wall};

/// A region of the open weight polytope cut out by the walls.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chamber {
    /// Sign of each wall's residual (in catalog order) on the chamber.
    pub signs: Vec<i8>,
}

/// `coeffs · x > bound`.
#[derive(Clone, Debug)]
struct Strict {
    coeffs: Vec<BigInt>,
    bound: BigInt,
}

fn polytope(r: usize, n: usize) -> Vec<Strict> {
    let dim = n * (r - 1);
    let unit = |k: usize, v: i64| {
        let mut c = alloc::vec![BigInt::zero(); dim];
        c[k] = BigInt::from(v);
        c
    };
    let mut out = Vec::new();
    for i in 0..n {
        let base = i * (r - 1);
        // 1 - a_1 > 0
        out.push(Strict { coeffs: unit(base, -1), bound: BigInt::from(-1) });
        for j in 0..r - 2 {
            let mut c = unit(base + j, 1);
            c[base + j + 1] = BigInt::from(-1);
            out.push(Strict { coeffs: c, bound: BigInt::zero() });
        }
        out.push(Strict { coeffs: unit(base + r - 2, 1), bound: BigInt::zero() });
    }
    out
}

fn wall_side(w: &Wall, r: usize, sign: i8) -> Strict {
    // residual = coeffs · a + constant; sign·residual > 0
    let (coeffs, constant) = w.spec.linear_form(r);
    let s = BigInt::from(sign);
    Strict { coeffs: coeffs.iter().map(|&c| &s * BigInt::from(c)).collect(), bound: -(&s * BigInt::from(constant)) }
}

/// Fourier–Motzkin elimination for a system of strict inequalities.
fn feasible(system: &[Strict], dim: usize) -> bool {
    let mut current: Vec<Strict> = system.to_vec();
    for k in 0..dim {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut next = Vec::new();
        for c in current {
            if c.coeffs[k].is_positive() {
                lower.push(c);
            } else if c.coeffs[k].is_negative() {
                upper.push(c);
            } else {
                next.push(c);
            }
        }
        for p in &lower {
            for q in &upper {
                let (a, b) = (q.coeffs[k].abs(), p.coeffs[k].clone());
                let coeffs: Vec<BigInt> = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| &a * x + &b * y).collect();
                let bound = &a * &p.bound + &b * &q.bound;
                next.push(Strict { coeffs, bound });
            }
        }
        match reduce(next) {
            Some(sys) => current = sys,
            None => return false,
        }
    }
    current.iter().all(|c| c.bound.is_negative())
}

/// Drops trivially true rows, keeps the tightest of parallel rows. `None`
/// when a row with zero coefficients is violated.
fn reduce(rows: Vec<Strict>) -> Option<Vec<Strict>> {
    let mut best: BTreeMap<Vec<BigInt>, BigRational> = BTreeMap::new();
    for row in rows {
        let g = row.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            if !row.bound.is_negative() {
                return None;
            }
            continue;
        }
        let key: Vec<BigInt> = row.coeffs.iter().map(|c| c / &g).collect();
        let b = BigRational::new(row.bound, g);
        match best.get_mut(&key) {
            Some(old) if *old >= b => {}
            Some(old) => *old = b,
            None => {
                best.insert(key, b);
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, b)| {
                // scale back to integers: coeffs·x > p/q  ⇔  q·coeffs·x > p
                let (p, q) = (b.numer().clone(), b.denom().clone());
                Strict { coeffs: coeffs.into_iter().map(|c| c * &q).collect(), bound: p }
            })
            .collect(),
    )
}

/// All chambers of the arrangement of `walls` inside the open polytope for
/// rank `r` and `n` points, found by depth-first search over sign choices.
pub fn enumerate_chambers(r: usize, n: usize, walls: &[Wall]) -> Vec<Chamber> {
    let dim = n * (r - 1);
    let mut out = Vec::new();
    let mut system = polytope(r, n);
    let mut signs = Vec::with_capacity(walls.len());
    if feasible(&system, dim) {
        dfs(r, dim, walls, &mut system, &mut signs, &mut out);
    }
    out
}

fn dfs(r: usize, dim: usize, walls: &[Wall], system: &mut Vec<Strict>, signs: &mut Vec<i8>, out: &mut Vec<Chamber>) {
    let k = signs.len();
    if k == walls.len() {
        out.push(Chamber { signs: signs.clone() });
        return;
    }
    for sign in [1i8, -1] {
        system.push(wall_side(&walls[k], r, sign));
        if feasible(system, dim) {
            signs.push(sign);
            dfs(r, dim, walls, system, signs, out);
            signs.pop();
        }
        system.pop();
    }
}

/// Number of chambers for rank `r` and `n` points.
pub fn count_chambers(r: usize, n: usize) -> usize {
    enumerate_chambers(r, n, &enumerate_walls(r, n)).len()
}

/// Pairs of chambers separated by exactly one wall, as `(i, j, wall)` with
/// `i < j`. Such chambers share a facet on that wall.
pub fn chamber_adjacency(chambers: &[Chamber]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..chambers.len() {
        for j in i + 1..chambers.len() {
            let diff: Vec<usize> =
                (0..chambers[i].signs.len()).filter(|&k| chambers[i].signs[k] != chambers[j].signs[k]).collect();
            if diff.len() == 1 {
                out.push((i, j, diff[0]));
            }
        }
    }
    out
}
