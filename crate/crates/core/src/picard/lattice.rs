use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::DivisorClass;
use crate::error::{Error, Result};
use crate::weights::ParabolicWeight;

/// Solutions in `Z^dim` of homogeneous integer equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSubgroup {
    dim: usize,
    equations: Vec<Vec<i64>>,
}

impl LatticeSubgroup {
    pub fn new(dim: usize, equations: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(e) = equations.iter().find(|e| e.len() != dim) {
            return Err(Error::InvalidWeight(format!("equation of length {} in dimension {dim}", e.len())));
        }
        Ok(Self { dim, equations })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim
            && self
                .equations
                .iter()
                .all(|e| e.iter().zip(x).map(|(a, b)| i128::from(*a) * i128::from(*b)).sum::<i128>() == 0)
    }

    /// A basis of the subgroup as a lattice.
    ///
    /// Column operations reduce the equation matrix to echelon form while
    /// tracking a unimodular transform; its trailing columns span the kernel
    /// over `Z`, not merely over `Q`.
    pub fn basis(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.dim;
        let mut a: Vec<Vec<BigInt>> =
            self.equations.iter().map(|e| e.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut u: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        let col_op = |m: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, f: &BigInt| {
            for row in m.iter_mut() {
                let t = &row[src] * f;
                row[dst] -= t;
            }
        };
        let swap = |m: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
            for row in m.iter_mut() {
                row.swap(x, y);
            }
        };
        let mut c = 0;
        for i in 0..a.len() {
            if c == n {
                break;
            }
            loop {
                let pivot = (c..n).filter(|&j| !a[i][j].is_zero()).min_by(|&x, &y| a[i][x].abs().cmp(&a[i][y].abs()));
                let Some(p) = pivot else { break };
                swap(&mut a, c, p);
                swap(&mut u, c, p);
                let mut done = true;
                for j in c + 1..n {
                    if !a[i][j].is_zero() {
                        let f = &a[i][j] / &a[i][c];
                        col_op(&mut a, j, c, &f);
                        col_op(&mut u, j, c, &f);
                        done &= a[i][j].is_zero();
                    }
                }
                if done {
                    c += 1;
                    break;
                }
            }
        }
        (c..n)
            .map(|j| {
                let mut v: Vec<BigInt> = u.iter().map(|row| row[j].clone()).collect();
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    v.iter_mut().for_each(|x| *x = -x.clone());
                }
                v.iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::InvariantBreach(String::from("basis entry exceeds i64"))))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.basis()?.len())
    }
}

fn lcm_of_denominators(a: &ParabolicWeight) -> BigInt {
    a.points().iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// The primitive class `(ℓ_0, d)` with `a_j^i ℓ_0 = λ_j^i`, where `ℓ_0` is
/// the least common denominator of the weight.
pub fn ray_generator(a: &ParabolicWeight) -> Result<DivisorClass> {
    let l0 = lcm_of_denominators(a);
    let too_big = || Error::InvalidWeight(String::from("weight denominators exceed i64"));
    let level = l0.to_i64().ok_or_else(too_big)?;
    let mut d = Vec::with_capacity(a.n());
    for p in a.points() {
        let lam: Vec<i64> =
            p.iter().map(|x| (x.numer() * (&l0 / x.denom())).to_i64().ok_or_else(too_big)).collect::<Result<_>>()?;
        let mut row = Vec::with_capacity(lam.len());
        for j in 0..lam.len() {
            row.push(lam[j] - lam.get(j + 1).copied().unwrap_or(0));
        }
        d.push(row);
    }
    DivisorClass::new(a.rank(), level, d)
}

/// Equations `a_j^i ℓ = Σ_{k≥j} d_k^i` on `(ℓ, d)`; the solutions form the
/// ray through [`ray_generator`].
pub fn subgroup_for_weight(a: &ParabolicWeight) -> Result<LatticeSubgroup> {
    let r = a.rank();
    let dim = 1 + a.n() * (r - 1);
    let mut eqs = Vec::new();
    for (i, p) in a.points().iter().enumerate() {
        for (j, x) in p.iter().enumerate() {
            let too_big = || Error::InvalidWeight(format!("weight {x} does not fit i64"));
            let mut e = alloc::vec![0i64; dim];
            e[0] = x.numer().to_i64().ok_or_else(too_big)?;
            let den = x.denom().to_i64().ok_or_else(too_big)?;
            for k in j..r - 1 {
                e[1 + i * (r - 1) + k] = -den;
            }
            eqs.push(e);
        }
    }
    LatticeSubgroup::new(dim, eqs)
}

/// A special point on a component of the normalization: `component` is
/// 0-based, `point` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeEnd {
    pub component: usize,
    pub point: usize,
}

/// Classes on the product of component lattices with equal levels and
/// `λ^{q} = (λ^{p})^*` at the two branches of every node.
///
/// `points[c]` is the number of special points on component `c`. The dual
/// reverses the coefficients `d_j`.
pub fn subgroup_k_nodal(rank: usize, points: &[usize], nodes: &[(NodeEnd, NodeEnd)]) -> Result<LatticeSubgroup> {
    if rank < 2 {
        return Err(Error::InvalidWeight(format!("rank must be at least 2, got {rank}")));
    }
    let w = rank - 1;
    let mut offsets = Vec::with_capacity(points.len());
    let mut dim = 0;
    for &n in points {
        offsets.push(dim);
        dim += 1 + n * w;
    }
    let mut eqs = Vec::new();
    for c in 1..points.len() {
        let mut e = alloc::vec![0i64; dim];
        e[0] = 1;
        e[offsets[c]] = -1;
        eqs.push(e);
    }
    let locate = |end: &NodeEnd| -> Result<usize> {
        match points.get(end.component) {
            Some(&n) if end.point >= 1 && end.point <= n => Ok(offsets[end.component] + 1 + (end.point - 1) * w),
            _ => Err(Error::UnknownLeg(end.point as u32)),
        }
    };
    for (p, q) in nodes {
        let (bp, bq) = (locate(p)?, locate(q)?);
        for k in 0..w {
            let mut e = alloc::vec![0i64; dim];
            e[bq + k] += 1;
            e[bp + w - 1 - k] -= 1;
            eqs.push(e);
        }
    }
    LatticeSubgroup::new(dim, eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::q;
    use alloc::vec;

    #[test]
    fn ray_examples() {
        let a = ParabolicWeight::new(2, vec![vec![q(1, 2)]]).unwrap();
        assert_eq!(ray_generator(&a).unwrap().coords(), vec![2, 1]);
        assert_eq!(subgroup_for_weight(&a).unwrap().basis().unwrap(), vec![vec![2, 1]]);

        let a = ParabolicWeight::new(3, vec![vec![q(1, 2), q(1, 4)]]).unwrap();
        assert_eq!(ray_generator(&a).unwrap().coords(), vec![4, 1, 1]);
        assert_eq!(subgroup_for_weight(&a).unwrap().basis().unwrap(), vec![vec![4, 1, 1]]);

        let z = ParabolicWeight::new_partial(3, vec![vec![q(0, 1), q(0, 1)]]).unwrap();
        assert_eq!(ray_generator(&z).unwrap().coords(), vec![1, 0, 0]);
        assert_eq!(subgroup_for_weight(&z).unwrap().basis().unwrap(), vec![vec![1, 0, 0]]);

        let none = ParabolicWeight::new(2, vec![]).unwrap();
        assert_eq!(subgroup_for_weight(&none).unwrap().basis().unwrap(), vec![vec![1]]);
    }

    #[test]
    fn ray_of_two_points() {
        let a = ParabolicWeight::new(3, vec![vec![q(2, 3), q(1, 3)], vec![q(1, 2), q(1, 6)]]).unwrap();
        let g = ray_generator(&a).unwrap();
        assert_eq!(g.coords(), vec![6, 2, 2, 2, 1]);
        let s = subgroup_for_weight(&a).unwrap();
        assert!(s.contains(&g.coords()));
        assert_eq!(s.basis().unwrap(), vec![g.coords()]);
    }

    #[test]
    fn nodal_examples() {
        let e = |component, point| NodeEnd { component, point };
        let s = subgroup_k_nodal(2, &[1, 1], &[(e(0, 1), e(1, 1))]).unwrap();
        assert_eq!(s.equations(), &[vec![1, 0, -1, 0], vec![0, -1, 0, 1]]);
        assert_eq!(s.rank().unwrap(), 2);

        let s = subgroup_k_nodal(3, &[1, 1], &[(e(0, 1), e(1, 1))]).unwrap();
        assert!(s.contains(&[3, 2, 1, 3, 1, 2]));
        assert!(!s.contains(&[3, 2, 1, 3, 2, 1]));

        let s = subgroup_k_nodal(3, &[2], &[]).unwrap();
        assert!(s.equations().is_empty());
        assert_eq!(s.rank().unwrap(), 5);

        assert!(subgroup_k_nodal(2, &[1], &[(e(0, 1), e(1, 1))]).is_err());
    }

    #[test]
    fn basis_is_saturated() {
        // a basis read off a rational solution could miss (1, 1, 1)
        let s = LatticeSubgroup::new(3, vec![vec![2, 4, -6]]).unwrap();
        let b = s.basis().unwrap();
        assert_eq!(b.len(), 2);
        for v in &b {
            assert!(s.contains(v));
        }
        // (1, 1, 1) = x·b0 + y·b1 with integer x, y
        let (u, v) = (&b[0], &b[1]);
        let target = [1i64, 1, 1];
        let mut found = false;
        for x in -10..=10 {
            for y in -10..=10 {
                if (0..3).all(|k| x * u[k] + y * v[k] == target[k]) {
                    found = true;
                }
            }
        }
        assert!(found);
    }
}
