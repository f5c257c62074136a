use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::{divisor_to_level_weights, lattice::ray_generator};
use crate::curves::{StableGraph, WeightAssignment};
use crate::error::{Error, Result};
use crate::fusion::LevelContext;
use crate::ranks::RankEngine;
use crate::weights::ParabolicWeight;

/// `h_m = rank` of the block on `graph` at level `m ℓ_0` with weights
/// `m λ_0`, for `m = 0..=max_degree`. Leg `i` carries point `i` of `a`.
pub fn hilbert_function(graph: &StableGraph, a: &ParabolicWeight, max_degree: u32) -> Result<Vec<BigUint>> {
    graph.validate().map_err(Error::InvalidGraph)?;
    if graph.n() as usize != a.n() {
        return Err(Error::InvalidWeight(format!("graph has {} legs but the weight has {} points", graph.n(), a.n())));
    }
    let generator = ray_generator(a)?;
    let (l0, lambdas) = divisor_to_level_weights(&generator).to_partitions(a.rank())?;
    let mut out = Vec::with_capacity(max_degree as usize + 1);
    for m in 0..=max_degree {
        let level = l0.checked_mul(m).ok_or_else(|| Error::InvalidWeight(format!("level {l0}·{m} overflows")))?;
        let engine = RankEngine::new(LevelContext::new(a.rank(), level)?);
        let ws: Vec<_> = lambdas.iter().map(|w| w.scale(m)).collect();
        out.push(engine.graph_rank(graph, &WeightAssignment::from_list(level, &ws))?);
    }
    Ok(out)
}

/// Whether every graph gives the same Hilbert function. All graphs must
/// share `(g, n)`.
pub fn flatness_check(graphs: &[StableGraph], a: &ParabolicWeight, max_degree: u32) -> Result<bool> {
    let Some(first) = graphs.first() else { return Ok(true) };
    let kind = (first.genus(), first.n());
    if let Some(g) = graphs.iter().find(|g| (g.genus(), g.n()) != kind) {
        return Err(Error::MismatchedType(format!("(g, n) = ({}, {}) and ({}, {})", kind.0, kind.1, g.genus(), g.n())));
    }
    let reference = hilbert_function(first, a, max_degree)?;
    for g in &graphs[1..] {
        if hilbert_function(g, a, max_degree)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}
