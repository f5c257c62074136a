//! Acceptance suite. One line per criterion, `PASS` or `FAIL`, then a
//! nonzero exit if anything failed. Run with
//! `cargo test -p parblocks --test acceptance`.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use parblocks::sampling::{realized_sign_vectors, sample_points, DEFAULT_SAMPLES};
use parblocks_core::curves::{stable_graphs, StableGraph};
use parblocks_core::fusion::{fuse, lr_coefficient, weights_at_level, LevelContext, WeightPartition};
use parblocks_core::picard::{
    anticanonical_class, descends, descent_index, flatness_check, hilbert_function, in_cone_e, ConePosition,
    DivisorClass,
};
use parblocks_core::ranks::{RankEngine, RankTensor};
use parblocks_core::weights::{
    codim_lower_bound, count_chambers, destabilizing_data, enumerate_walls, is_dominant, perturb_general, weight_ac,
    Dominance, ParabolicWeight,
};

/// Every comparison below is exact.
const TOLERANCE: u64 = 0;
const SAMPLE_SEED: u64 = 0;
const D1_RANGE: i64 = 4;

const BUDGET_MOD_R: Duration = Duration::from_secs(60);
const BUDGET_DEFORMATION: Duration = Duration::from_secs(300);
const BUDGET_LR: Duration = Duration::from_secs(120);
const BUDGET_HILBERT: Duration = Duration::from_secs(300);
const BUDGET_DEFAULT: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ctx(r: usize, l: u32) -> LevelContext {
    LevelContext::new(r, l).unwrap()
}

fn stable_types(max_g: u32, max_n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 0..=max_n {
            if 2 * g + n >= 3 || (g, n) == (1, 0) {
                out.push((g, n));
            }
        }
    }
    out
}

fn tensor(engine: &RankEngine, g: &StableGraph) -> Result<RankTensor, String> {
    engine.graph_rank_tensor(g).map_err(|e| format!("{g:?}: {e}"))
}

fn mod_r_vanishing() -> Outcome {
    let mut checked = 0u64;
    for r in 2..=3usize {
        for level in 0..=3u32 {
            let engine = RankEngine::new(ctx(r, level));
            for (g, n) in stable_types(2, 3) {
                for graph in stable_graphs(g, n) {
                    for (labels, v) in tensor(&engine, &graph)?.iter() {
                        let total: u32 = labels.iter().map(|w| w.size()).sum();
                        if total % r as u32 != 0 {
                            checked += 1;
                            if !v.is_zero() {
                                return Err(format!("r={r} l={level} {graph:?} {labels:?} has rank {v}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} labelings with r ∤ Σ|λ| all zero"))
}

/// `(r, ℓ, g, n)` suite shared by deformation invariance and vacua.
fn suite() -> Vec<(usize, u32, u32, u32)> {
    let mut out = Vec::new();
    for r in 2..=3usize {
        for level in 0..=2u32 {
            for (g, n) in stable_types(2, 3) {
                out.push((r, level, g, n));
            }
        }
    }
    out
}

fn deformation_invariance() -> Outcome {
    let (mut graphs, mut entries) = (0usize, 0usize);
    for (r, level, g, n) in suite() {
        let engine = RankEngine::new(ctx(r, level));
        let all = stable_graphs(g, n);
        let first = tensor(&engine, &all[0])?;
        entries += first.iter().count();
        for other in &all[1..] {
            if tensor(&engine, other)? != first {
                return Err(format!("r={r} l={level} ({g},{n}): {other:?} differs from {:?}", all[0]));
            }
        }
        graphs += all.len();
    }
    Ok(format!("{graphs} graphs agree with their reference on {entries} labelings"))
}

fn propagation_of_vacua() -> Outcome {
    let mut checked = 0usize;
    for (r, level, g, n) in suite() {
        let engine = RankEngine::new(ctx(r, level));
        let zero = WeightPartition::zero(r);
        for graph in stable_graphs(g, n) {
            let mut bigger = graph.clone();
            bigger.vertices[0].legs.push(n + 1);
            let small = tensor(&engine, &graph)?;
            let big = tensor(&engine, &bigger)?;
            for (labels, v) in small.iter() {
                let mut ext = labels.clone();
                ext.push(zero.clone());
                if big.get(&ext) != Some(v) {
                    return Err(format!("r={r} l={level} {graph:?} {labels:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} labelings unchanged by an extra vacuum leg"))
}

fn verlinde_spot_checks() -> Outcome {
    let mut cases: Vec<(u32, u32, u64)> = (0..=6).map(|l| (1, l, u64::from(l) + 1)).collect();
    cases.push((2, 1, 4));
    for &(g, level, want) in &cases {
        let oracle = oracles::SMatrix::new(2, level).verlinde(g, &[]);
        let ours = RankEngine::new(ctx(2, level)).rank(g, &[]).map_err(|e| e.to_string())?;
        let diff = (oracle as i128 - want as i128).unsigned_abs() as u64;
        if diff > TOLERANCE || ours != BigUint::from(want) {
            return Err(format!("g={g} l={level}: expected {want}, oracle {oracle}, ours {ours}"));
        }
    }
    Ok(format!("{} cases against the trigonometric oracle", cases.len()))
}

fn small_partitions(r: usize, max_size: u32) -> Vec<Vec<u32>> {
    (0..=max_size).flat_map(|s| oracles::partitions_of_size(r - 1, s)).collect()
}

fn fusion_stabilization() -> Outcome {
    let (mut fusions, mut lrs) = (0usize, 0usize);
    for r in 2..=3usize {
        let ws = small_partitions(r, 5);
        for l in &ws {
            for m in &ws {
                let (a, b) = (WeightPartition::new(r, l).unwrap(), WeightPartition::new(r, m).unwrap());
                let size = l.iter().sum::<u32>() + m.iter().sum::<u32>();
                for n in small_partitions(r, size) {
                    let c = WeightPartition::new(r, &n).unwrap();
                    if lr_coefficient(&a, &b, &c) != oracles::sl_lr(r, l, m, &n) {
                        return Err(format!("lr r={r} {l:?} {m:?} {n:?}"));
                    }
                    lrs += 1;
                }
                let base = l[0] + m[0];
                for level in [base, base + 1] {
                    let cx = ctx(r, level);
                    for c in weights_at_level(cx) {
                        let f = fuse(cx, &a, &b, &c).map_err(|e| e.to_string())?;
                        if f != lr_coefficient(&a, &b, &c.dual()) {
                            return Err(format!("fuse r={r} l={level} {l:?} {m:?} {c}"));
                        }
                        fusions += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{lrs} LR triples against tableaux, {fusions} stable fusion coefficients"))
}

fn chamber_counts() -> Outcome {
    let mut report = Vec::new();
    for n in 0..=3usize {
        let walls = enumerate_walls(2, n);
        let exact = count_chambers(2, n);
        let sampled = realized_sign_vectors(2, n, &walls, DEFAULT_SAMPLES, SAMPLE_SEED, true).len();
        if exact.abs_diff(sampled) as u64 > TOLERANCE {
            return Err(format!("r=2 n={n}: exact {exact}, sampled {sampled}"));
        }
        report.push(format!("n={n}:{exact}"));
    }
    Ok(format!("r=2 chambers {} over {DEFAULT_SAMPLES} samples", report.join(" ")))
}

fn codim_weights(r: usize, n: usize) -> Vec<ParabolicWeight> {
    let mut out = sample_points(r, n, 4, SAMPLE_SEED);
    if n > 0 {
        let center = weight_ac(r, n);
        out.push(perturb_general(&center, &(center.boundary_distance() * q(1, 1000))).unwrap());
    }
    out
}

fn codimension_bound() -> Outcome {
    let (mut data, mut theorem) = (0usize, 0usize);
    for r in 2..=3usize {
        for n in 0..=3usize {
            for a in codim_weights(r, n) {
                let all = destabilizing_data(&a, -D1_RANGE..=D1_RANGE);
                for g in 0..=3u32 {
                    let floor = q((r as i64 - 1) * (i64::from(g) - 1), 1);
                    for datum in &all {
                        let b = codim_lower_bound(g, &a, datum).map_err(|e| e.to_string())?;
                        if b <= floor {
                            return Err(format!("g={g} {:?} {datum:?}: bound {b} ≤ {floor}", a.points()));
                        }
                        data += 1;
                    }
                    if g >= 2 {
                        match is_dominant(g, &a) {
                            Ok(Dominance::YesByTheorem(_)) => theorem += 1,
                            other => return Err(format!("g={g} {:?}: {other:?}", a.points())),
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{data} (datum, genus) pairs above (r-1)(g-1), {theorem} yes-by-theorem verdicts"))
}

/// Index of the kernel of `x ↦ Σ j d_j^i mod r`, from the residues of the
/// unit vectors.
fn residue_index(r: usize, n: usize) -> usize {
    let len = 1 + n * (r - 1);
    let mut g = r;
    for k in 0..len {
        let mut e = vec![0i64; len];
        e[k] = 1;
        let div = DivisorClass::from_coords(r, &e).unwrap();
        let v: i64 = div.d().iter().flat_map(|row| row.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x)).sum();
        g = num_integer::gcd(g, v.rem_euclid(r as i64) as usize);
    }
    r / g
}

fn lattice_calculus() -> Outcome {
    for r in 2..=5usize {
        for n in 0..=4usize {
            let index = residue_index(r, n);
            if index != descent_index(r, n) || (n > 0 && index != r) {
                return Err(format!("r={r} n={n}: residues give {index}, descent_index {}", descent_index(r, n)));
            }
            // descends agrees with the residue map on every generator
            let len = 1 + n * (r - 1);
            for k in 0..len {
                let mut e = vec![0i64; len];
                e[k] = 1;
                let div = DivisorClass::from_coords(r, &e).unwrap();
                let step = if k == 0 { 0 } else { (k - 1) % (r - 1) + 1 };
                if descends(&div) != (step % r == 0) {
                    return Err(format!("r={r} n={n}: descends wrong on generator {k}"));
                }
            }
            if in_cone_e(&anticanonical_class(r, n)) != ConePosition::Interior {
                return Err(format!("anticanonical class of ({r},{n}) is not interior"));
            }
        }
    }
    Ok("index r for n ≥ 1, anticanonical interior for r ≤ 5, n ≤ 4".into())
}

fn flat_family() -> Outcome {
    let cases: Vec<(u32, u32, ParabolicWeight)> = vec![
        (2, 0, ParabolicWeight::new(2, vec![]).unwrap()),
        (1, 2, ParabolicWeight::new(2, vec![vec![q(1, 2)], vec![q(1, 2)]]).unwrap()),
        (1, 2, ParabolicWeight::new(2, vec![vec![q(1, 3)], vec![q(2, 3)]]).unwrap()),
        (1, 2, ParabolicWeight::new(2, vec![vec![q(1, 4)], vec![q(1, 2)]]).unwrap()),
    ];
    let mut report = Vec::new();
    for (g, n, a) in &cases {
        let graphs = stable_graphs(*g, *n);
        let max_degree = 3;
        if !flatness_check(&graphs, a, max_degree).map_err(|e| e.to_string())? {
            return Err(format!("({g},{n}) {:?} is not flat", a.points()));
        }
        let h = hilbert_function(&graphs[0], a, max_degree).map_err(|e| e.to_string())?;
        let h: Vec<String> = h.iter().map(|x| x.to_string()).collect();
        report.push(format!("({g},{n}) {} graphs [{}]", graphs.len(), h.join(",")));
    }
    Ok(report.join("; "))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "mod-r vanishing", BUDGET_MOD_R, mod_r_vanishing),
        (2, "deformation invariance", BUDGET_DEFORMATION, deformation_invariance),
        (3, "propagation of vacua", BUDGET_DEFAULT, propagation_of_vacua),
        (4, "Verlinde spot checks", BUDGET_DEFAULT, verlinde_spot_checks),
        (5, "fusion stabilization and LR tableaux", BUDGET_LR, fusion_stabilization),
        (6, "chamber count vs sampling", BUDGET_DEFAULT, chamber_counts),
        (7, "codimension bound", BUDGET_DEFAULT, codimension_bound),
        (8, "lattice calculus", BUDGET_DEFAULT, lattice_calculus),
        (9, "flat-family witness", BUDGET_HILBERT, flat_family),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail} ({:.1}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why} ({:.1}s)", took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
