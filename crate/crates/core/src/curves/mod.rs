//! Stable pointed curves as dual graphs.
//!
//! A [`StableGraph`] lists vertices (irreducible components) with their
//! genus and external legs, and edges (nodes) as pairs of vertex indices. A
//! pair `(v, v)` is a self-node. External legs carry ids `1..=n`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fusion::WeightPartition;

mod catalog;
mod degenerate;

pub use catalog::{canonical_form, stable_graphs, trivalent_graphs, CanonicalForm};
pub use degenerate::degenerate_to_trivalent;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub genus: u32,
    pub legs: Vec<u32>,
}

impl Vertex {
    pub fn new(genus: u32, legs: &[u32]) -> Self {
        Self { genus, legs: legs.to_vec() }
    }
}

/// The first structural problem found in a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    Unstable { vertex: usize },
    EdgeOutOfRange { edge: usize },
    DuplicateLeg { leg: u32 },
    LegNumbering { expected: u32, found: u32 },
    Disconnected { vertex: usize },
    LabelOnUnknownLeg { leg: u32 },
    MixedRank { leg: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::Unstable { vertex } => write!(f, "stability violated at vertex {vertex}"),
            Violation::EdgeOutOfRange { edge } => write!(f, "edge {edge} refers to a missing vertex"),
            Violation::DuplicateLeg { leg } => write!(f, "leg {leg} attached more than once"),
            Violation::LegNumbering { expected, found } => {
                write!(f, "legs must be numbered 1..n: expected {expected}, found {found}")
            }
            Violation::Disconnected { vertex } => write!(f, "vertex {vertex} is not connected to vertex 0"),
            Violation::LabelOnUnknownLeg { leg } => write!(f, "label given for unknown leg {leg}"),
            Violation::MixedRank { leg } => write!(f, "label on leg {leg} has a different rank"),
        }
    }
}

/// Dual graph of a stable pointed curve.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StableGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    pub labels: BTreeMap<u32, WeightPartition>,
}

impl StableGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Self {
        Self { vertices, edges, labels: BTreeMap::new() }
    }

    /// One smooth component of genus `g` with legs `1..=n`.
    pub fn smooth(g: u32, n: u32) -> Self {
        let legs: Vec<u32> = (1..=n).collect();
        Self::new(alloc::vec![Vertex { genus: g, legs }], Vec::new())
    }

    pub fn with_labels(mut self, labels: BTreeMap<u32, WeightPartition>) -> Self {
        self.labels = labels;
        self
    }

    /// Number of external legs.
    pub fn n(&self) -> u32 {
        self.vertices.iter().map(|v| v.legs.len() as u32).sum()
    }

    /// Arithmetic genus: vertex genera plus the first Betti number.
    pub fn genus(&self) -> u32 {
        let vg: u32 = self.vertices.iter().map(|v| v.genus).sum();
        let betti = self.edges.len() as i64 - self.vertices.len() as i64 + 1;
        (vg as i64 + betti.max(0)) as u32
    }

    /// Legs plus edge ends at `v`; a self-node counts twice.
    pub fn valence(&self, v: usize) -> usize {
        let ends: usize = self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum();
        self.vertices[v].legs.len() + ends
    }

    /// Vertex carrying `leg`.
    pub fn leg_vertex(&self, leg: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.legs.contains(&leg))
    }

    /// All leg ids in increasing order.
    pub fn legs(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// Whether this is one of the two single-component (1, 0) graphs, which
    /// are admitted although their only vertex has `2g - 2 + val = 0`.
    pub fn is_unpointed_elliptic(&self) -> bool {
        if self.vertices.len() != 1 || self.n() != 0 {
            return false;
        }
        matches!((self.vertices[0].genus, self.edges.as_slice()), (1, []) | (0, [(0, 0)]))
    }

    /// Checks the structural invariants. The first failure is reported.
    pub fn validate(&self) -> core::result::Result<(), Violation> {
        if self.vertices.is_empty() {
            return Err(Violation::NoVertices);
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a >= self.vertices.len() || b >= self.vertices.len() {
                return Err(Violation::EdgeOutOfRange { edge: i });
            }
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            for &l in &v.legs {
                if !seen.insert(l) {
                    return Err(Violation::DuplicateLeg { leg: l });
                }
            }
        }
        for (expected, &found) in (1u32..).zip(seen.iter()) {
            if expected != found {
                return Err(Violation::LegNumbering { expected, found });
            }
        }
        if !self.is_unpointed_elliptic() {
            for (i, v) in self.vertices.iter().enumerate() {
                if 2 * v.genus as i64 - 2 + self.valence(i) as i64 <= 0 {
                    return Err(Violation::Unstable { vertex: i });
                }
            }
        }
        let reach = self.component_of(0);
        if let Some(v) = (0..self.vertices.len()).find(|v| !reach.contains(v)) {
            return Err(Violation::Disconnected { vertex: v });
        }
        let rank = self.labels.values().next().map(|w| w.rank());
        for (&leg, w) in &self.labels {
            if !seen.contains(&leg) {
                return Err(Violation::LabelOnUnknownLeg { leg });
            }
            if Some(w.rank()) != rank {
                return Err(Violation::MixedRank { leg });
            }
        }
        Ok(())
    }

    fn component_of(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen.contains(&b) {
                    stack.push(b);
                }
                if b == v && !seen.contains(&a) {
                    stack.push(a);
                }
            }
        }
        seen
    }

    fn checked(self) -> Result<Self> {
        self.validate().map_err(Error::InvalidGraph)?;
        Ok(self)
    }

    /// Renumbers legs to `1..=n` keeping their relative order; labels follow.
    fn renumber_legs(&mut self) {
        let order = self.legs();
        let map: BTreeMap<u32, u32> = order.iter().zip(1u32..).map(|(&o, n)| (o, n)).collect();
        for v in &mut self.vertices {
            for l in &mut v.legs {
                *l = map[l];
            }
        }
        self.labels =
            core::mem::take(&mut self.labels).into_iter().filter_map(|(l, w)| map.get(&l).map(|&n| (n, w))).collect();
    }

    fn remove_vertex(&mut self, v: usize) {
        self.vertices.remove(v);
        for e in &mut self.edges {
            if e.0 > v {
                e.0 -= 1;
            }
            if e.1 > v {
                e.1 -= 1;
            }
        }
    }
}

/// Removes a leg of weight zero (or unlabeled) and stabilizes.
///
/// A genus-0 component left with two special points is contracted: a
/// remaining leg moves to the neighbouring component, and two nodes merge
/// into one.
pub fn forget_leg(graph: &StableGraph, leg: u32) -> Result<StableGraph> {
    let v = graph.leg_vertex(leg).ok_or(Error::UnknownLeg(leg))?;
    if graph.labels.get(&leg).is_some_and(|w| !w.is_zero()) {
        return Err(Error::NonzeroWeightLeg(leg));
    }
    let mut out = graph.clone();
    out.vertices[v].legs.retain(|&l| l != leg);
    out.labels.remove(&leg);

    if out.vertices[v].genus == 0 && out.valence(v) == 2 && !out.is_unpointed_elliptic() {
        let incident: Vec<usize> =
            (0..out.edges.len()).filter(|&i| out.edges[i].0 == v || out.edges[i].1 == v).collect();
        match (out.vertices[v].legs.len(), incident.as_slice()) {
            (2, []) => return Err(Error::Instability(String::from("genus 0 with two points has no stable model"))),
            (1, &[e]) => {
                let (a, b) = out.edges[e];
                let other = if a == v { b } else { a };
                let moved = out.vertices[v].legs[0];
                out.vertices[other].legs.push(moved);
                out.vertices[other].legs.sort_unstable();
                out.edges.remove(e);
                out.remove_vertex(v);
            }
            (0, &[e, f]) => {
                let far = |(a, b): (usize, usize)| if a == v { b } else { a };
                let (x, y) = (far(out.edges[e]), far(out.edges[f]));
                out.edges[e] = (x.min(y), x.max(y));
                out.edges.remove(f);
                out.remove_vertex(v);
            }
            _ => {
                return Err(Error::Instability(format!("cannot contract vertex {v}")));
            }
        }
    }
    out.renumber_legs();
    out.checked()
}

fn check_gluable(graph: &StableGraph, a: u32, b: u32) -> Result<()> {
    match (graph.labels.get(&a), graph.labels.get(&b)) {
        (Some(x), Some(y)) if *y != x.dual() => Err(Error::LabelMismatch(a, b)),
        _ => Ok(()),
    }
}

/// Glues two legs of one graph into a node.
pub fn glue_nonseparating(graph: &StableGraph, leg_a: u32, leg_b: u32) -> Result<StableGraph> {
    let va = graph.leg_vertex(leg_a).ok_or(Error::UnknownLeg(leg_a))?;
    let vb = graph.leg_vertex(leg_b).ok_or(Error::UnknownLeg(leg_b))?;
    if leg_a == leg_b {
        return Err(Error::InvalidGraph(Violation::DuplicateLeg { leg: leg_a }));
    }
    check_gluable(graph, leg_a, leg_b)?;
    let mut out = graph.clone();
    out.vertices[va].legs.retain(|&l| l != leg_a);
    out.vertices[vb].legs.retain(|&l| l != leg_b);
    out.labels.remove(&leg_a);
    out.labels.remove(&leg_b);
    out.edges.push((va.min(vb), va.max(vb)));
    out.renumber_legs();
    out.checked()
}

/// Glues `leg_a` of `g1` to `leg_b` of `g2`. Legs of `g2` are numbered after
/// those of `g1` in the result.
pub fn glue_separating(g1: &StableGraph, g2: &StableGraph, leg_a: u32, leg_b: u32) -> Result<StableGraph> {
    let va = g1.leg_vertex(leg_a).ok_or(Error::UnknownLeg(leg_a))?;
    let vb = g2.leg_vertex(leg_b).ok_or(Error::UnknownLeg(leg_b))?;
    if let (Some(x), Some(y)) = (g1.labels.get(&leg_a), g2.labels.get(&leg_b)) {
        if *y != x.dual() {
            return Err(Error::LabelMismatch(leg_a, leg_b));
        }
    }
    let shift = g1.legs().last().copied().unwrap_or(0);
    let offset = g1.vertices.len();
    let mut out = g1.clone();
    for v in &g2.vertices {
        out.vertices.push(Vertex { genus: v.genus, legs: v.legs.iter().map(|l| l + shift).collect() });
    }
    out.edges.extend(g2.edges.iter().map(|&(a, b)| (a + offset, b + offset)));
    for (&l, w) in &g2.labels {
        out.labels.insert(l + shift, w.clone());
    }
    out.vertices[va].legs.retain(|&l| l != leg_a);
    out.vertices[vb + offset].legs.retain(|&l| l != leg_b + shift);
    out.labels.remove(&leg_a);
    out.labels.remove(&(leg_b + shift));
    out.edges.push((va, vb + offset));
    out.renumber_legs();
    out.checked()
}

/// Weights attached to external legs at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    pub level: u32,
    pub weights: BTreeMap<u32, WeightPartition>,
}

impl WeightAssignment {
    pub fn new(level: u32, weights: BTreeMap<u32, WeightPartition>) -> Self {
        Self { level, weights }
    }

    /// Assigns `weights[i]` to leg `i + 1`.
    pub fn from_list(level: u32, weights: &[WeightPartition]) -> Self {
        Self { level, weights: (1u32..).zip(weights.iter().cloned()).collect() }
    }

    /// Uses the labels stored on the graph.
    pub fn from_graph(graph: &StableGraph, level: u32) -> Self {
        Self { level, weights: graph.labels.clone() }
    }
}
