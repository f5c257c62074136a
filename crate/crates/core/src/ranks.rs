//! Ranks of conformal blocks on stable graphs.
//!
//! The three-point ranks come from a [`FusionTable`]. Higher genus-0 ranks are
//! built by sewing three-point blocks, and a graph's rank is the contraction
//! of a tensor network with one factor per vertex and one summed index per
//! node. Counts are accumulated in `u128` and recomputed with big integers if
//! that overflows.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use spin::RwLock;

use crate::curves::{degenerate_to_trivalent, StableGraph, WeightAssignment};
use crate::error::{Error, Result};
use crate::fusion::{weights_at_level, FusionTable, LevelContext, TableStats, WeightPartition};

trait Count: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(x: u64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn to_big(&self) -> BigUint;
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_u64(x: u64) -> Self {
        x as u128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(x: u64) -> Self {
        BigUint::from(x)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

struct Memo<C> {
    genus0: RwLock<BTreeMap<Vec<usize>, C>>,
    vertex: RwLock<BTreeMap<(u32, Vec<usize>), C>>,
}

impl<C> Memo<C> {
    fn new() -> Self {
        Self { genus0: RwLock::new(BTreeMap::new()), vertex: RwLock::new(BTreeMap::new()) }
    }
}

/// Ranks of all labelings of a graph's legs at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTensor {
    /// Leg ids in increasing order; the slowest-varying index comes first.
    pub legs: Vec<u32>,
    /// `P_ℓ` in lexicographic order.
    pub weights: Vec<WeightPartition>,
    pub data: Vec<BigUint>,
}

impl RankTensor {
    /// Rank for the labeling that gives `labels[i]` to `legs[i]`.
    pub fn get(&self, labels: &[WeightPartition]) -> Option<&BigUint> {
        if labels.len() != self.legs.len() {
            return None;
        }
        let mut idx = 0usize;
        for l in labels {
            let k = self.weights.binary_search(l).ok()?;
            idx = idx * self.weights.len() + k;
        }
        self.data.get(idx)
    }

    /// Iterates over `(labeling, rank)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<WeightPartition>, &BigUint)> + '_ {
        let p = self.weights.len();
        let n = self.legs.len();
        self.data.iter().enumerate().map(move |(mut idx, v)| {
            let mut labels = alloc::vec![self.weights[0].clone(); n];
            for slot in labels.iter_mut().rev() {
                *slot = self.weights[idx % p].clone();
                idx /= p;
            }
            (labels, v)
        })
    }
}

/// Nonzero `N(λ_i, λ_j, ν)` as `(ν, N)` pairs, keyed by sorted `(i, j)`.
type Rows = BTreeMap<(usize, usize), Vec<(usize, u64)>>;

/// Rank computations at a fixed rank and level, sharing memo tables.
pub struct RankEngine {
    table: FusionTable,
    weights: Vec<WeightPartition>,
    index: BTreeMap<WeightPartition, usize>,
    duals: Vec<usize>,
    rows: RwLock<Rows>,
    fast: Memo<u128>,
    slow: Memo<BigUint>,
}

impl RankEngine {
    pub fn new(ctx: LevelContext) -> Self {
        Self::with_table(FusionTable::new(ctx))
    }

    /// Uses a pre-populated fusion table.
    pub fn with_table(table: FusionTable) -> Self {
        let weights = weights_at_level(table.context());
        let index: BTreeMap<_, _> = weights.iter().cloned().zip(0..).collect();
        let duals = weights.iter().map(|w| index[&w.dual()]).collect();
        Self { table, weights, index, duals, rows: RwLock::new(BTreeMap::new()), fast: Memo::new(), slow: Memo::new() }
    }

    pub fn context(&self) -> LevelContext {
        self.table.context()
    }

    pub fn table(&self) -> &FusionTable {
        &self.table
    }

    pub fn stats(&self) -> TableStats {
        self.table.stats()
    }

    pub fn weights(&self) -> &[WeightPartition] {
        &self.weights
    }

    fn idx(&self, w: &WeightPartition) -> Result<usize> {
        self.context().check(w)?;
        Ok(self.index[w])
    }

    /// Nonzero `N(λ_i, λ_j, ν)` as `(ν, N)` pairs.
    fn row(&self, i: usize, j: usize) -> Result<Vec<(usize, u64)>> {
        let key = (i.min(j), i.max(j));
        if let Some(r) = self.rows.read().get(&key) {
            return Ok(r.clone());
        }
        let mut row = Vec::new();
        for (k, w) in self.weights.iter().enumerate() {
            let n = self.table.get(&self.weights[key.0], &self.weights[key.1], w)?;
            if n > 0 {
                row.push((k, n));
            }
        }
        self.rows.write().entry(key).or_insert_with(|| row.clone());
        Ok(row)
    }

    fn three(&self, a: usize, b: usize, c: usize) -> Result<u64> {
        Ok(self.row(a, b)?.iter().find(|&&(k, _)| k == c).map_or(0, |&(_, n)| n))
    }

    fn genus0<C: Count>(&self, memo: &Memo<C>, ws: &[usize]) -> Result<Option<C>> {
        let mut key = ws.to_vec();
        key.sort_unstable();
        if let Some(v) = memo.genus0.read().get(&key) {
            return Ok(Some(v.clone()));
        }
        let value: C = match key.len() {
            0 => C::one(),
            1 => bool_count(key[0] == 0),
            2 => bool_count(key[1] == self.duals[key[0]]),
            3 => C::from_u64(self.three(key[0], key[1], key[2])?),
            _ => {
                let mut acc = C::zero();
                // sew the last two points onto a three-pointed component
                let n = key.len();
                let (a, b) = (key[n - 1], key[n - 2]);
                let mut rest: Vec<usize> = Vec::with_capacity(n - 1);
                for (mu, c) in self.row(a, b)? {
                    rest.clear();
                    rest.push(self.duals[mu]);
                    rest.extend_from_slice(&key[..n - 2]);
                    let Some(sub) = self.genus0(memo, &rest)? else { return Ok(None) };
                    let Some(term) = C::from_u64(c).mul(&sub) else { return Ok(None) };
                    let Some(next) = acc.add(&term) else { return Ok(None) };
                    acc = next;
                }
                acc
            }
        };
        memo.genus0.write().insert(key, value.clone());
        Ok(Some(value))
    }

    /// Rank at a component of genus `h` with the given special points.
    fn vertex<C: Count>(&self, memo: &Memo<C>, h: u32, ws: &[usize]) -> Result<Option<C>> {
        if h == 0 {
            return self.genus0(memo, ws);
        }
        let mut key = ws.to_vec();
        key.sort_unstable();
        if let Some(v) = memo.vertex.read().get(&(h, key.clone())) {
            return Ok(Some(v.clone()));
        }
        let mut acc = C::zero();
        let mut ext = Vec::with_capacity(key.len() + 2);
        for mu in 0..self.weights.len() {
            ext.clear();
            ext.extend_from_slice(&key);
            ext.push(mu);
            ext.push(self.duals[mu]);
            let Some(sub) = self.vertex(memo, h - 1, &ext)? else { return Ok(None) };
            let Some(next) = acc.add(&sub) else { return Ok(None) };
            acc = next;
        }
        memo.vertex.write().insert((h, key), acc.clone());
        Ok(Some(acc))
    }

    /// Rank of the genus-0 block with the given weights.
    pub fn genus0_rank(&self, weights: &[WeightPartition]) -> Result<BigUint> {
        let ws = weights.iter().map(|w| self.idx(w)).collect::<Result<Vec<_>>>()?;
        if let Some(v) = self.genus0::<u128>(&self.fast, &ws)? {
            return Ok(v.to_big());
        }
        Ok(self.genus0::<BigUint>(&self.slow, &ws)?.expect("big integers do not overflow"))
    }

    /// Rank of the block on `graph` with the given leg weights.
    pub fn graph_rank(&self, graph: &StableGraph, assignment: &WeightAssignment) -> Result<BigUint> {
        graph.validate().map_err(Error::InvalidGraph)?;
        if assignment.level != self.context().level {
            return Err(Error::InvalidWeight(format!(
                "assignment is at level {} but the engine is at level {}",
                assignment.level,
                self.context().level
            )));
        }
        for &leg in assignment.weights.keys() {
            if graph.leg_vertex(leg).is_none() {
                return Err(Error::UnknownLeg(leg));
            }
        }
        let mut fixed = BTreeMap::new();
        for leg in graph.legs() {
            let w = assignment.weights.get(&leg).ok_or(Error::UnlabeledLeg(leg))?;
            fixed.insert(leg, self.idx(w)?);
        }
        let data = self.contract_any(graph, &fixed)?;
        Ok(data.into_iter().next().expect("one entry for a fixed labeling"))
    }

    /// Ranks for every labeling of the graph's legs by weights in `P_ℓ`.
    pub fn graph_rank_tensor(&self, graph: &StableGraph) -> Result<RankTensor> {
        graph.validate().map_err(Error::InvalidGraph)?;
        let data = self.contract_any(graph, &BTreeMap::new())?;
        Ok(RankTensor { legs: graph.legs(), weights: self.weights.clone(), data })
    }

    /// Rank on the canonical maximal degeneration of type `(g, n)`, with
    /// `weights[i]` at leg `i + 1`.
    pub fn rank(&self, g: u32, weights: &[WeightPartition]) -> Result<BigUint> {
        let n = weights.len() as u32;
        if g == 0 && n < 3 {
            if weights.iter().any(|w| !w.is_zero()) {
                return Err(Error::Instability(format!("genus 0 with {n} points is unstable")));
            }
            for w in weights {
                self.idx(w)?;
            }
            return Ok(<BigUint as One>::one());
        }
        let graph = degenerate_to_trivalent(&StableGraph::smooth(g, n));
        let assignment = WeightAssignment::from_list(self.context().level, weights);
        self.graph_rank(&graph, &assignment)
    }

    fn contract_any(&self, graph: &StableGraph, fixed: &BTreeMap<u32, usize>) -> Result<Vec<BigUint>> {
        if let Some(v) = self.contract::<u128>(&self.fast, graph, fixed)? {
            return Ok(v.iter().map(Count::to_big).collect());
        }
        Ok(self.contract::<BigUint>(&self.slow, graph, fixed)?.expect("big integers do not overflow"))
    }

    fn contract<C: Count>(
        &self,
        memo: &Memo<C>,
        graph: &StableGraph,
        fixed: &BTreeMap<u32, usize>,
    ) -> Result<Option<Vec<C>>> {
        let p = self.weights.len();
        // variables: one per non-loop edge, then one per leg
        let bridges: Vec<usize> = (0..graph.edges.len()).filter(|&e| graph.edges[e].0 != graph.edges[e].1).collect();
        let legs = graph.legs();
        let nb = bridges.len();
        let mut domains: Vec<Vec<usize>> = alloc::vec![(0..p).collect(); nb];
        for leg in &legs {
            domains.push(match fixed.get(leg) {
                Some(&w) => alloc::vec![w],
                None => (0..p).collect(),
            });
        }

        let mut factors: Vec<Factor<C>> = Vec::with_capacity(graph.vertices.len());
        for (v, vert) in graph.vertices.iter().enumerate() {
            let loops = graph.edges.iter().filter(|&&(a, b)| a == v && b == v).count() as u32;
            // (variable, is second endpoint)
            let mut slots: Vec<(usize, bool)> = Vec::new();
            for (k, &e) in bridges.iter().enumerate() {
                let (a, b) = graph.edges[e];
                if a == v {
                    slots.push((k, false));
                }
                if b == v {
                    slots.push((k, true));
                }
            }
            for &l in &vert.legs {
                let k = legs.binary_search(&l).expect("leg listed");
                slots.push((nb + k, false));
            }
            slots.sort_unstable();
            let vars: Vec<usize> = slots.iter().map(|s| s.0).collect();
            let dims: Vec<usize> = vars.iter().map(|&x| domains[x].len()).collect();
            let size: usize = dims.iter().product();
            let mut data = Vec::with_capacity(size);
            let mut pos = alloc::vec![0usize; vars.len()];
            let mut ws = alloc::vec![0usize; vars.len()];
            for _ in 0..size {
                for (i, &(x, second)) in slots.iter().enumerate() {
                    let w = domains[x][pos[i]];
                    ws[i] = if second { self.duals[w] } else { w };
                }
                let Some(val) = self.vertex(memo, vert.genus + loops, &ws)? else { return Ok(None) };
                data.push(val);
                advance(&mut pos, &dims);
            }
            factors.push(Factor { vars, data });
        }

        let mut remaining: Vec<usize> = (0..nb).collect();
        while !remaining.is_empty() {
            let (slot, _) = remaining
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let mut union: Vec<usize> =
                        factors.iter().filter(|f| f.vars.contains(&x)).flat_map(|f| f.vars.iter().copied()).collect();
                    union.sort_unstable();
                    union.dedup();
                    let cost: usize = union.iter().filter(|&&y| y != x).map(|&y| domains[y].len()).product();
                    (i, (cost, x))
                })
                .min_by_key(|&(_, key)| key)
                .expect("nonempty");
            let x = remaining.remove(slot);
            let (touch, keep): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&x));
            factors = keep;
            let Some(f) = combine(&touch, Some(x), &domains) else { return Ok(None) };
            factors.push(f);
        }
        let Some(last) = combine(&factors, None, &domains) else { return Ok(None) };
        debug_assert!(last.vars.iter().all(|&x| x >= nb));
        // fixed legs have domain size 1; open legs are ordered by id
        Ok(Some(last.data))
    }
}

struct Factor<C> {
    vars: Vec<usize>,
    data: Vec<C>,
}

fn bool_count<C: Count>(b: bool) -> C {
    if b {
        C::one()
    } else {
        C::zero()
    }
}

/// Mixed-radix increment, last position fastest.
fn advance(pos: &mut [usize], dims: &[usize]) {
    for i in (0..pos.len()).rev() {
        pos[i] += 1;
        if pos[i] < dims[i] {
            return;
        }
        pos[i] = 0;
    }
}

/// Multiplies `factors` and sums out `eliminate`. `None` on overflow.
fn combine<C: Count>(factors: &[Factor<C>], eliminate: Option<usize>, domains: &[Vec<usize>]) -> Option<Factor<C>> {
    let mut union: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    let out_vars: Vec<usize> = union.iter().copied().filter(|&y| Some(y) != eliminate).collect();
    let dims: Vec<usize> = union.iter().map(|&y| domains[y].len()).collect();
    let out_dims: Vec<usize> = out_vars.iter().map(|&y| domains[y].len()).collect();
    let out_size: usize = out_dims.iter().product();
    let mut out = alloc::vec![C::zero(); out_size];

    // strides of each factor and of the output, expressed over `union`
    let strides_for = |vars: &[usize]| -> Vec<usize> {
        let mut s = alloc::vec![0usize; union.len()];
        let mut acc = 1usize;
        for &y in vars.iter().rev() {
            let k = union.binary_search(&y).expect("in union");
            s[k] = acc;
            acc *= domains[y].len();
        }
        s
    };
    let fstrides: Vec<Vec<usize>> = factors.iter().map(|f| strides_for(&f.vars)).collect();
    let ostrides = strides_for(&out_vars);

    let total: usize = dims.iter().product();
    let mut pos = alloc::vec![0usize; union.len()];
    for _ in 0..total {
        let mut prod = C::one();
        let mut zero = false;
        for (f, st) in factors.iter().zip(&fstrides) {
            let i: usize = pos.iter().zip(st).map(|(p, s)| p * s).sum();
            let v = &f.data[i];
            if v.is_zero() {
                zero = true;
                break;
            }
            prod = prod.mul(v)?;
        }
        if !zero {
            let o: usize = pos.iter().zip(&ostrides).map(|(p, s)| p * s).sum();
            out[o] = out[o].add(&prod)?;
        }
        advance(&mut pos, &dims);
    }
    Some(Factor { vars: out_vars, data: out })
}

/// Genus-0 rank with a fresh engine.
pub fn genus0_rank(ctx: LevelContext, weights: &[WeightPartition]) -> Result<BigUint> {
    RankEngine::new(ctx).genus0_rank(weights)
}

/// Graph rank with a fresh engine.
pub fn graph_rank(ctx: LevelContext, graph: &StableGraph, assignment: &WeightAssignment) -> Result<BigUint> {
    RankEngine::new(ctx).graph_rank(graph, assignment)
}

/// Rank of type `(g, n)` with a fresh engine.
pub fn rank(g: u32, ctx: LevelContext, weights: &[WeightPartition]) -> Result<BigUint> {
    RankEngine::new(ctx).rank(g, weights)
}

/// The weight `(2(r-1), 2(r-2), ..., 2)`.
pub fn anticanonical_weight(r: usize) -> WeightPartition {
    let parts: Vec<u32> = (1..r).rev().map(|j| 2 * j as u32).collect();
    WeightPartition::new(r, &parts).expect("decreasing")
}

/// Rank at level `2r` with the anticanonical weight at every point. Unstable
/// genus-0 types use the genus-0 conventions.
pub fn anticanonical_section_rank(g: u32, r: usize, n: u32) -> Result<BigUint> {
    let ctx = LevelContext::new(r, 2 * r as u32)?;
    let weights = alloc::vec![anticanonical_weight(r); n as usize];
    let engine = RankEngine::new(ctx);
    if g == 0 && n < 3 {
        return engine.genus0_rank(&weights);
    }
    engine.rank(g, &weights)
}
