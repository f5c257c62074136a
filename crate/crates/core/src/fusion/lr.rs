//! Classical tensor products of `sl_r` representations.
//!
//! `V_λ ⊗ V_μ` is decomposed with the Brauer–Klimyk rule: the weights of
//! `V_μ` (from Gelfand–Tsetlin patterns) are added to `λ + ρ`, each result is
//! reflected into the dominant chamber, and contributions are signed by the
//! reflecting permutation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::WeightPartition;

/// GL_r weight multiplicities of the irreducible with highest weight `top`.
pub(crate) fn gl_weight_multiplicities(top: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    let r = top.len();
    let mut out = BTreeMap::new();
    // rows[k] has length r - k; rows[0] = top.
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(r);
    rows.push(top.to_vec());
    patterns(&mut rows, r, &mut out);
    out
}

fn patterns(rows: &mut Vec<Vec<i64>>, r: usize, out: &mut BTreeMap<Vec<i64>, u64>) {
    let last = rows.last().expect("top row present");
    if last.len() == 1 {
        // weight_k = |row of length k| - |row of length k-1|
        let mut weight = alloc::vec![0i64; r];
        let mut prev = 0i64;
        for k in 1..=r {
            let sum: i64 = rows[r - k].iter().sum();
            weight[k - 1] = sum - prev;
            prev = sum;
        }
        *out.entry(weight).or_insert(0) += 1;
        return;
    }
    let upper = last.clone();
    let len = upper.len() - 1;
    let mut next = alloc::vec![0i64; len];
    interlace(&upper, 0, &mut next, rows, r, out);
}

fn interlace(
    upper: &[i64],
    i: usize,
    next: &mut Vec<i64>,
    rows: &mut Vec<Vec<i64>>,
    r: usize,
    out: &mut BTreeMap<Vec<i64>, u64>,
) {
    if i == next.len() {
        rows.push(next.clone());
        patterns(rows, r, out);
        rows.pop();
        return;
    }
    for v in upper[i + 1]..=upper[i] {
        next[i] = v;
        interlace(upper, i + 1, next, rows, r, out);
    }
}

/// Sorts `x` into strictly decreasing order. Returns the sign of the sorting
/// permutation, or `None` when two entries coincide.
pub(crate) fn sort_with_sign(x: &mut [i64]) -> Option<i64> {
    let mut sign = 1i64;
    // insertion sort; inputs are short
    for i in 1..x.len() {
        let mut j = i;
        while j > 0 && x[j - 1] < x[j] {
            x.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && x[j - 1] == x[j] {
            return None;
        }
        if j < i && x[j] == x[j + 1] {
            return None;
        }
    }
    Some(sign)
}

/// Signed GL_r decomposition of `V_λ ⊗ V_μ`, keyed by `r`-row partitions.
pub(crate) fn gl_product(lambda: &[i64], mu: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    let r = lambda.len();
    let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (w, mult) in gl_weight_multiplicities(mu) {
        let mut x: Vec<i64> = (0..r).map(|i| lambda[i] + w[i] + (r - 1 - i) as i64).collect();
        let Some(sign) = sort_with_sign(&mut x) else { continue };
        for (i, xi) in x.iter_mut().enumerate() {
            *xi -= (r - 1 - i) as i64;
        }
        *out.entry(x).or_insert(0) += sign * mult as i64;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Decomposition of `V_λ ⊗ V_μ` into `sl_r` irreducibles.
///
/// # Panics
/// If the ranks differ.
pub fn lr_product(lambda: &WeightPartition, mu: &WeightPartition) -> BTreeMap<WeightPartition, u64> {
    assert_eq!(lambda.rank(), mu.rank(), "rank mismatch");
    gl_product(&lambda.gl_row(), &mu.gl_row())
        .into_iter()
        .map(|(row, c)| {
            debug_assert!(c > 0, "negative multiplicity after cancellation");
            (WeightPartition::from_gl_row(&row), c as u64)
        })
        .collect()
}

/// Multiplicity of `V_ν` in `V_λ ⊗ V_μ` as `sl_r` representations.
pub fn lr_coefficient(lambda: &WeightPartition, mu: &WeightPartition, nu: &WeightPartition) -> u64 {
    if lambda.rank() != mu.rank() || lambda.rank() != nu.rank() {
        return 0;
    }
    lr_product(lambda, mu).get(nu).copied().unwrap_or(0)
}
