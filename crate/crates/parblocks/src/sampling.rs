//! Random rational points of the weight polytope and the sign vectors they
//! realize.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use parblocks_core::weights::{sign_vector, ParabolicWeight, Wall};

/// Common denominator of sampled coordinates; prime.
pub const SAMPLE_DENOMINATOR: u64 = 1_000_003;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// A full-flag weight with coordinates `k / D`: at each point `r - 1`
/// distinct numerators in `1..D`, sorted downward.
pub fn sample_weight<R: Rng>(rng: &mut R, r: usize, n: usize) -> ParabolicWeight {
    let den = BigInt::from(SAMPLE_DENOMINATOR);
    let points = (0..n)
        .map(|_| {
            let mut ks: Vec<usize> = index::sample(rng, SAMPLE_DENOMINATOR as usize - 1, r - 1).into_vec();
            ks.sort_unstable_by(|a, b| b.cmp(a));
            ks.into_iter().map(|k| BigRational::new(BigInt::from(k + 1), den.clone())).collect()
        })
        .collect();
    ParabolicWeight::new(r, points).expect("sampled weight lies in the open polytope")
}

/// The same `samples` points for a given seed, in order.
pub fn sample_points(r: usize, n: usize, samples: usize, seed: u64) -> Vec<ParabolicWeight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sample_weight(&mut rng, r, n)).collect()
}

/// Distinct sign vectors over the sampled points. Points on a wall are
/// skipped. The result does not depend on `parallel`.
pub fn realized_sign_vectors(
    r: usize,
    n: usize,
    walls: &[Wall],
    samples: usize,
    seed: u64,
    parallel: bool,
) -> BTreeSet<Vec<i8>> {
    let points = sample_points(r, n, samples, seed);
    if parallel {
        points.par_iter().filter_map(|a| sign_vector(walls, a)).collect::<Vec<_>>().into_iter().collect()
    } else {
        points.iter().filter_map(|a| sign_vector(walls, a)).collect()
    }
}
