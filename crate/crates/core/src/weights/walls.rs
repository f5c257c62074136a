use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{weight_ac, ParabolicWeight, Q};

/// Data `(s, d, {J^i})` of the hyperplane where a rank-`s` subbundle of
/// degree `d` with flag positions `J^i` has the same slope as the bundle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WallSpec {
    pub s: usize,
    pub d: i64,
    /// 1-based positions, each of size `s`, in increasing order.
    pub subsets: Vec<Vec<usize>>,
}

impl WallSpec {
    /// Coefficients `r·[j ∈ J^i] - s` of `a_j^i` (`j < r`) and the constant
    /// `r·d` of the residual.
    pub fn linear_form(&self, r: usize) -> (Vec<i64>, i64) {
        let mut coeffs = Vec::with_capacity(self.subsets.len() * (r - 1));
        for js in &self.subsets {
            for j in 1..r {
                let inside = i64::from(js.contains(&j));
                coeffs.push(r as i64 * inside - self.s as i64);
            }
        }
        (coeffs, r as i64 * self.d)
    }
}

/// A geometric wall with every spec that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// The first generating spec in enumeration order.
    pub spec: WallSpec,
    pub generators: Vec<WallSpec>,
    /// Primitive equation `normal · a = offset` with the first nonzero
    /// coefficient positive.
    pub normal: Vec<i64>,
    pub offset: i64,
}

/// `r·(d + Σ_i Σ_{j∈J^i} a_j^i) - s·Σ_i Σ_j a_j^i`; zero exactly on the wall.
pub fn wall_residual(a: &ParabolicWeight, w: &WallSpec) -> Q {
    let r = a.rank();
    let mut inside = Q::zero();
    for (i, js) in w.subsets.iter().enumerate() {
        for &j in js {
            inside += a.get(i + 1, j);
        }
    }
    let rq = Q::from_integer(BigInt::from(r as i64));
    let sq = Q::from_integer(BigInt::from(w.s as i64));
    rq * (Q::from_integer(BigInt::from(w.d)) + inside) - sq * a.total()
}

pub(super) fn combinations(r: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn go(start: usize, r: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for j in start..=r {
            cur.push(j);
            go(j + 1, r, s, cur, out);
            cur.pop();
        }
    }
    go(1, r, s, &mut cur, &mut out);
    out
}

fn normalize(coeffs: &[i64], constant: i64) -> (Vec<i64>, i64) {
    // residual = coeffs · a + constant, so the wall is coeffs · a = -constant
    let mut offset = -constant;
    let mut normal = coeffs.to_vec();
    let g = normal.iter().fold(offset.abs(), |g, &c| g.gcd(&c.abs()));
    if g > 1 {
        normal.iter_mut().for_each(|c| *c /= g);
        offset /= g;
    }
    if normal.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        normal.iter_mut().for_each(|c| *c = -*c);
        offset = -offset;
    }
    (normal, offset)
}

/// Every wall meeting the open weight polytope for rank `r` and `n` points.
///
/// For each `(s, {J^i})` the linear part of the residual is separable over
/// points, so its extreme values over the closed polytope are sums of
/// per-point extremes at the vertices `(1,..,1,0,..,0)`. A wall meets the
/// interior exactly when `-r·d` lies strictly between them.
pub fn enumerate_walls(r: usize, n: usize) -> Vec<Wall> {
    let mut walls: Vec<Wall> = Vec::new();
    let mut by_equation: BTreeMap<(Vec<i64>, i64), usize> = BTreeMap::new();
    for s in 1..r {
        let subsets = combinations(r, s);
        let total = subsets.len().pow(n as u32);
        for t in 0..total {
            let mut rest = t;
            let mut js: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
            for slot in js.iter_mut().rev() {
                *slot = subsets[rest % subsets.len()].clone();
                rest /= subsets.len();
            }
            let probe = WallSpec { s, d: 0, subsets: js.clone() };
            let (coeffs, _) = probe.linear_form(r);
            let (mut lo, mut hi) = (0i64, 0i64);
            for point in coeffs.chunks(r - 1) {
                let mut partial = 0i64;
                let (mut pmin, mut pmax) = (0i64, 0i64);
                for &c in point {
                    partial += c;
                    pmin = pmin.min(partial);
                    pmax = pmax.max(partial);
                }
                lo += pmin;
                hi += pmax;
            }
            let rr = r as i64;
            // lo < -r d < hi
            let d_min = Integer::div_floor(&-hi, &rr) + 1;
            let d_max = Integer::div_ceil(&-lo, &rr) - 1;
            for d in d_min..=d_max {
                let spec = WallSpec { s, d, subsets: js.clone() };
                let key = normalize(&coeffs, rr * d);
                match by_equation.get(&key) {
                    Some(&k) => walls[k].generators.push(spec),
                    None => {
                        by_equation.insert(key.clone(), walls.len());
                        walls.push(Wall {
                            spec: spec.clone(),
                            generators: alloc::vec![spec],
                            normal: key.0,
                            offset: key.1,
                        });
                    }
                }
            }
        }
    }
    walls
}

/// No wall passes through `a`.
pub fn is_general(a: &ParabolicWeight) -> bool {
    sign_vector(&enumerate_walls(a.rank(), a.n()), a).is_some()
}

/// Signs of the residuals of `a` on each wall, or `None` if `a` lies on one.
pub fn sign_vector(walls: &[Wall], a: &ParabolicWeight) -> Option<Vec<i8>> {
    walls
        .iter()
        .map(|w| {
            let v = wall_residual(a, &w.spec);
            if v.is_zero() {
                None
            } else if v.is_positive() {
                Some(1)
            } else {
                Some(-1)
            }
        })
        .collect()
}

/// ℓ∞ distance from the central weight to the nearest wall that does not
/// pass through it; `None` when there is no such wall.
pub fn ac_radius(r: usize, n: usize) -> Option<Q> {
    let ac = weight_ac(r, n).flat();
    let mut best: Option<Q> = None;
    for w in enumerate_walls(r, n) {
        let mut value = Q::from_integer(BigInt::from(-w.offset));
        for (c, x) in w.normal.iter().zip(&ac) {
            value += Q::from_integer(BigInt::from(*c)) * x;
        }
        if value.is_zero() {
            continue;
        }
        let l1: i64 = w.normal.iter().map(|c| c.abs()).sum();
        let dist = value.abs() / Q::from_integer(BigInt::from(l1));
        if best.as_ref().is_none_or(|b| dist < *b) {
            best = Some(dist);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::q;
    use alloc::vec;

    fn pw(r: usize, pts: &[&[(i64, i64)]]) -> ParabolicWeight {
        ParabolicWeight::new(r, pts.iter().map(|p| p.iter().map(|&(a, b)| q(a, b)).collect()).collect()).unwrap()
    }

    #[test]
    fn residual_examples() {
        let w = WallSpec { s: 1, d: 0, subsets: vec![vec![1], vec![2]] };
        assert_eq!(wall_residual(&pw(2, &[&[(1, 2)], &[(1, 2)]]), &w), q(0, 1));
        assert_ne!(wall_residual(&pw(2, &[&[(1, 2)], &[(1, 4)]]), &w), q(0, 1));
        let w1 = WallSpec { s: 1, d: 0, subsets: vec![vec![2]] };
        // 2·(0 + 0) - 1·(1/2)
        assert_eq!(wall_residual(&pw(2, &[&[(1, 2)]]), &w1), q(-1, 2));
    }

    #[test]
    fn catalog_examples() {
        assert!(enumerate_walls(2, 0).is_empty());
        assert!(enumerate_walls(2, 1).is_empty());
        let two = enumerate_walls(2, 2);
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].normal.clone(), two[0].offset), (vec![1, -1], 0));
        assert_eq!(two[0].generators.len(), 2);

        let mut three: Vec<(Vec<i64>, i64)> = enumerate_walls(2, 3).into_iter().map(|w| (w.normal, w.offset)).collect();
        three.sort();
        assert_eq!(three, vec![(vec![1, -1, -1], 0), (vec![1, -1, 1], 0), (vec![1, 1, -1], 0), (vec![1, 1, 1], 2)]);
    }

    #[test]
    fn generality_examples() {
        assert!(!is_general(&pw(2, &[&[(1, 2)], &[(1, 2)]])));
        assert!(is_general(&pw(2, &[&[(1, 2)], &[(1, 3)]])));
        assert!(is_general(&pw(2, &[&[(1, 7)]])));
        assert!(is_general(&pw(2, &[&[(5, 7)]])));
    }

    #[test]
    fn catalog_is_symmetric_under_point_swaps() {
        for (r, n) in [(2, 3), (3, 2), (3, 3)] {
            let walls = enumerate_walls(r, n);
            let eqs: alloc::collections::BTreeSet<_> = walls.iter().map(|w| (w.normal.clone(), w.offset)).collect();
            for w in &walls {
                // swap the first two points
                let mut c = w.normal.clone();
                for j in 0..r - 1 {
                    c.swap(j, (r - 1) + j);
                }
                let key = normalize(&c, -w.offset);
                assert!(eqs.contains(&key));
            }
        }
    }

    fn grid(r: usize, n: usize, den: i64) -> Vec<ParabolicWeight> {
        let mut point_choices: Vec<Vec<Q>> = Vec::new();
        let mut cur: Vec<i64> = Vec::new();
        fn go(r: usize, den: i64, top: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<Q>>) {
            if cur.len() == r - 1 {
                out.push(cur.iter().map(|&k| q(k, den)).collect());
                return;
            }
            for k in 1..top {
                cur.push(k);
                go(r, den, k, cur, out);
                cur.pop();
            }
        }
        go(r, den, den, &mut cur, &mut point_choices);
        let mut out = Vec::new();
        let m = point_choices.len();
        for t in 0..m.pow(n as u32) {
            let mut rest = t;
            let mut pts = Vec::new();
            for _ in 0..n {
                pts.push(point_choices[rest % m].clone());
                rest /= m;
            }
            out.push(ParabolicWeight::new(r, pts).unwrap());
        }
        out
    }

    #[test]
    fn catalog_matches_sign_changes_on_a_grid() {
        // a spec is a wall iff its residual changes sign over interior grid points
        for (r, n) in [(2, 2), (2, 3), (3, 2)] {
            let points = grid(r, n, 11);
            let walls = enumerate_walls(r, n);
            let eqs: alloc::collections::BTreeSet<_> = walls.iter().map(|w| (w.normal.clone(), w.offset)).collect();
            for s in 1..r {
                let subsets = combinations(r, s);
                for t in 0..subsets.len().pow(n as u32) {
                    let mut rest = t;
                    let mut js = Vec::new();
                    for _ in 0..n {
                        js.push(subsets[rest % subsets.len()].clone());
                        rest /= subsets.len();
                    }
                    for d in -6..=6 {
                        let spec = WallSpec { s, d, subsets: js.clone() };
                        let (mut pos, mut neg) = (false, false);
                        for a in &points {
                            let v = wall_residual(a, &spec);
                            pos |= v.is_positive();
                            neg |= v.is_negative();
                        }
                        let (c, k) = spec.linear_form(r);
                        let listed = eqs.contains(&normalize(&c, k));
                        assert_eq!(pos && neg, listed, "r={r} n={n} {spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn central_radius() {
        // r = 2, n = 3: a_c is on no wall, and all four walls are at distance 1/6
        assert_eq!(ac_radius(2, 3), Some(q(1, 6)));
        assert_eq!(ac_radius(2, 1), None);
        // r = 2, n = 2: the only wall passes through a_c
        assert_eq!(ac_radius(2, 2), None);
    }
}
