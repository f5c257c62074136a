use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{StableGraph, Vertex};

/// Isomorphism-invariant normal form of an unlabeled stable graph.
///
/// Legs are distinguishable, so only vertices with equal genus, legs,
/// valence and self-node count are permuted when searching for the minimum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> StableGraph {
        StableGraph::new(self.vertices.clone(), self.edges.clone())
    }
}

type Invariant = (u32, Vec<u32>, usize, usize);

pub fn canonical_form(graph: &StableGraph) -> CanonicalForm {
    let nv = graph.vertices.len();
    let invariant = |v: usize| -> Invariant {
        let mut legs = graph.vertices[v].legs.clone();
        legs.sort_unstable();
        let loops = graph.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
        (graph.vertices[v].genus, legs, graph.valence(v), loops)
    };
    let invs: Vec<Invariant> = (0..nv).map(invariant).collect();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by(|&a, &b| invs[a].cmp(&invs[b]));

    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=nv {
        if i == nv || invs[order[i]] != invs[order[start]] {
            blocks.push((start, i));
            start = i;
        }
    }

    let mut best: Option<CanonicalForm> = None;
    let mut current = order.clone();
    search(graph, &blocks, 0, &mut current, &mut best);
    best.expect("at least one ordering")
}

fn search(
    graph: &StableGraph,
    blocks: &[(usize, usize)],
    b: usize,
    current: &mut Vec<usize>,
    best: &mut Option<CanonicalForm>,
) {
    if b == blocks.len() {
        let form = relabel(graph, current);
        if best.as_ref().is_none_or(|x| form < *x) {
            *best = Some(form);
        }
        return;
    }
    let (lo, hi) = blocks[b];
    permute(graph, blocks, b, hi, lo, current, best);
}

fn permute(
    graph: &StableGraph,
    blocks: &[(usize, usize)],
    b: usize,
    hi: usize,
    k: usize,
    current: &mut Vec<usize>,
    best: &mut Option<CanonicalForm>,
) {
    if k + 1 >= hi {
        search(graph, blocks, b + 1, current, best);
        return;
    }
    for i in k..hi {
        current.swap(k, i);
        permute(graph, blocks, b, hi, k + 1, current, best);
        current.swap(k, i);
    }
}

fn relabel(graph: &StableGraph, order: &[usize]) -> CanonicalForm {
    let mut pos = alloc::vec![0usize; order.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let vertices = order
        .iter()
        .map(|&old| {
            let mut v = graph.vertices[old].clone();
            v.legs.sort_unstable();
            v
        })
        .collect();
    let mut edges: Vec<(usize, usize)> =
        graph.edges.iter().map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b]))).collect();
    edges.sort_unstable();
    CanonicalForm { vertices, edges }
}

/// One-step degenerations: a genus unit becomes a self-node, or a component
/// splits in two along a new node.
fn degenerations(graph: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for v in 0..graph.vertices.len() {
        if graph.vertices[v].genus > 0 {
            let mut g = graph.clone();
            g.vertices[v].genus -= 1;
            g.edges.push((v, v));
            out.push(g);
        }
        out.extend(splits(graph, v));
    }
    out
}

#[derive(Clone, Copy)]
enum Item {
    Leg(u32),
    Half(usize, u8),
}

fn splits(graph: &StableGraph, v: usize) -> Vec<StableGraph> {
    let mut items: Vec<Item> = graph.vertices[v].legs.iter().map(|&l| Item::Leg(l)).collect();
    for (e, &(a, b)) in graph.edges.iter().enumerate() {
        if a == v {
            items.push(Item::Half(e, 0));
        }
        if b == v {
            items.push(Item::Half(e, 1));
        }
    }
    let m = items.len();
    let genus = graph.vertices[v].genus;
    let fresh = graph.vertices.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        let right = mask.count_ones() as i64;
        let left = m as i64 - right;
        for h in 0..=genus {
            let (gl, gr) = (h as i64, (genus - h) as i64);
            if 2 * gl - 2 + left < 0 || 2 * gr - 2 + right < 0 {
                continue;
            }
            let mut g = graph.clone();
            g.vertices[v] = Vertex { genus: h, legs: Vec::new() };
            g.vertices.push(Vertex { genus: genus - h, legs: Vec::new() });
            for (i, item) in items.iter().enumerate() {
                let side = if mask & (1 << i) != 0 { fresh } else { v };
                match *item {
                    Item::Leg(l) => g.vertices[side].legs.push(l),
                    Item::Half(e, 0) => g.edges[e].0 = side,
                    Item::Half(e, _) => g.edges[e].1 = side,
                }
            }
            g.edges.push((v, fresh));
            out.push(g);
        }
    }
    out
}

/// Every stable graph of type `(g, n)` up to isomorphism, in canonical order.
/// Empty when `(g, n)` is unstable.
pub fn stable_graphs(g: u32, n: u32) -> Vec<StableGraph> {
    let smooth = StableGraph::smooth(g, n);
    if smooth.validate().is_err() {
        return Vec::new();
    }
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut frontier = alloc::vec![canonical_form(&smooth)];
    seen.insert(frontier[0].clone());
    while let Some(form) = frontier.pop() {
        for next in degenerations(&form.to_graph()) {
            if next.validate().is_err() {
                continue;
            }
            let c = canonical_form(&next);
            if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    seen.into_iter().map(|c| c.to_graph()).collect()
}

/// The maximally degenerate members of [`stable_graphs`].
pub fn trivalent_graphs(g: u32, n: u32) -> Vec<StableGraph> {
    stable_graphs(g, n)
        .into_iter()
        .filter(|gr| (0..gr.vertices.len()).all(|v| gr.vertices[v].genus == 0 && gr.valence(v) == 3))
        .collect()
}
