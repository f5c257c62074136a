//! Level truncation of classical products by affine Weyl folding.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::lr::{lr_product, sort_with_sign};
use super::{LevelContext, WeightPartition};
use crate::error::Result;

/// Folds `ν` into the level-ℓ alcove. Returns `None` on an affine wall,
/// otherwise the image and the sign of the folding element.
pub(crate) fn fold(ctx: LevelContext, nu: &WeightPartition) -> Option<(WeightPartition, i64)> {
    let r = ctx.rank;
    let k = (ctx.level as usize + r) as i64;
    let x: Vec<i64> = nu.gl_row().iter().enumerate().map(|(i, v)| v + (r - 1 - i) as i64).collect();

    let mut y: Vec<i64> = x.iter().map(|v| v.rem_euclid(k)).collect();
    let t: i64 = x.iter().map(|v| v.div_euclid(k)).sum();
    let extra = t.rem_euclid(r as i64) as usize;

    // Shift the `extra` smallest residues up by k so the translation part
    // lies in the root lattice.
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| (y[i], i));
    for &i in order.iter().take(extra) {
        y[i] += k;
    }

    let sign = sort_with_sign(&mut y)?;
    if y[0] - y[r - 1] >= k {
        return None;
    }
    let tau: Vec<i64> = y.iter().enumerate().map(|(i, v)| v - (r - 1 - i) as i64).collect();
    Some((WeightPartition::from_gl_row(&tau), sign))
}

/// The level-ℓ fusion product `λ ⊠ μ` as a map `κ ↦ N_{λμ}^κ`.
pub fn fusion_product(
    ctx: LevelContext,
    lambda: &WeightPartition,
    mu: &WeightPartition,
) -> Result<BTreeMap<WeightPartition, u64>> {
    ctx.check(lambda)?;
    ctx.check(mu)?;
    let mut acc: BTreeMap<WeightPartition, i64> = BTreeMap::new();
    for (nu, c) in lr_product(lambda, mu) {
        if let Some((image, sign)) = fold(ctx, &nu) {
            *acc.entry(image).or_insert(0) += sign * c as i64;
        }
    }
    let mut out = BTreeMap::new();
    for (k, v) in acc {
        debug_assert!(v >= 0, "negative fusion multiplicity for {k}");
        if v > 0 {
            out.insert(k, v as u64);
        }
    }
    Ok(out)
}

/// Three-point genus-0 rank `N(λ, μ, ν)`: the multiplicity of `ν*` in
/// `λ ⊠ μ`.
pub fn fuse(ctx: LevelContext, lambda: &WeightPartition, mu: &WeightPartition, nu: &WeightPartition) -> Result<u64> {
    ctx.check(nu)?;
    let prod = fusion_product(ctx, lambda, mu)?;
    Ok(prod.get(&nu.dual()).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fusion::{lr_coefficient, weights_at_level};

    fn w(rank: usize, parts: &[u32]) -> WeightPartition {
        WeightPartition::new(rank, parts).unwrap()
    }

    fn ctx(r: usize, l: u32) -> LevelContext {
        LevelContext::new(r, l).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(fuse(ctx(2, 1), &w(2, &[1]), &w(2, &[1]), &w(2, &[0])).unwrap(), 1);
        assert_eq!(fuse(ctx(2, 1), &w(2, &[1]), &w(2, &[1]), &w(2, &[1])).unwrap(), 0);
        assert_eq!(fuse(ctx(2, 2), &w(2, &[2]), &w(2, &[1]), &w(2, &[1])).unwrap(), 1);
    }

    #[test]
    fn level_violation() {
        let err = fuse(ctx(2, 1), &w(2, &[2]), &w(2, &[0]), &w(2, &[2])).unwrap_err();
        assert!(matches!(err, Error::LevelViolation { .. }));
    }

    #[test]
    fn sl2_level_two_table() {
        let c = ctx(2, 2);
        let p = fusion_product(c, &w(2, &[2]), &w(2, &[2])).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), alloc::vec![(w(2, &[0]), 1)]);
        let p = fusion_product(c, &w(2, &[1]), &w(2, &[1])).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn sl3_level_one_is_z3() {
        let c = ctx(3, 1);
        let a = w(3, &[1, 0]);
        let b = w(3, &[1, 1]);
        let p = fusion_product(c, &a, &a).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), alloc::vec![(b.clone(), 1)]);
        let p = fusion_product(c, &a, &b).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), alloc::vec![(w(3, &[0, 0]), 1)]);
    }

    #[test]
    fn folding_keeps_alcove_points() {
        for r in 2..5 {
            for l in 0..4 {
                let c = ctx(r, l);
                for lam in weights_at_level(c) {
                    assert_eq!(fold(c, &lam), Some((lam.clone(), 1)));
                }
            }
        }
    }

    #[test]
    fn symmetry_vacuum_and_grading() {
        for (r, l) in [(2, 3), (3, 2), (4, 1)] {
            let c = ctx(r, l);
            let all = weights_at_level(c);
            let zero = WeightPartition::zero(r);
            for a in &all {
                for b in &all {
                    let vac = fuse(c, a, &zero, b).unwrap();
                    assert_eq!(vac, u64::from(*b == a.dual()));
                    for d in &all {
                        let n = fuse(c, a, b, d).unwrap();
                        assert_eq!(n, fuse(c, b, a, d).unwrap());
                        assert_eq!(n, fuse(c, a, d, b).unwrap());
                        assert_eq!(n, fuse(c, d, b, a).unwrap());
                        if (a.size() + b.size() + d.size()) % r as u32 != 0 {
                            assert_eq!(n, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn large_level_matches_classical() {
        let a = w(3, &[2, 1]);
        let b = w(3, &[1, 0]);
        let c = ctx(3, 3);
        for nu in weights_at_level(c) {
            assert_eq!(fuse(c, &a, &b, &nu).unwrap(), lr_coefficient(&a, &b, &nu.dual()));
        }
    }
}
