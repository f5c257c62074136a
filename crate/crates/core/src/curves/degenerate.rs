use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{StableGraph, Vertex};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Point {
    Leg(u32),
    Half(usize, u8),
    LoopStart(u32),
    LoopEnd(u32),
}

/// Replaces every component by a maximally degenerate one.
///
/// Each genus-`h` vertex becomes `h` self-nodes; its special points (legs by
/// id, then node branches by edge index, then the new self-node branches) are
/// laid out left to right along a chain of three-pointed rational components.
/// The result has the same genus, legs and labels.
pub fn degenerate_to_trivalent(graph: &StableGraph) -> StableGraph {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut spine: Vec<(usize, usize)> = Vec::new();
    let mut at: BTreeMap<(usize, Point), usize> = BTreeMap::new();

    for (v, vert) in graph.vertices.iter().enumerate() {
        let mut points: Vec<Point> = Vec::new();
        let mut legs = vert.legs.clone();
        legs.sort_unstable();
        points.extend(legs.into_iter().map(Point::Leg));
        for (e, &(a, b)) in graph.edges.iter().enumerate() {
            if a == v {
                points.push(Point::Half(e, 0));
            }
            if b == v {
                points.push(Point::Half(e, 1));
            }
        }
        points.extend((0..vert.genus).map(Point::LoopStart));
        points.extend((0..vert.genus).map(Point::LoopEnd));

        let first = vertices.len();
        let m = points.len();
        let chain = if m <= 3 { 1 } else { m - 2 };
        for _ in 0..chain {
            vertices.push(Vertex { genus: 0, legs: Vec::new() });
        }
        for i in 1..chain {
            spine.push((first + i - 1, first + i));
        }
        for (i, &p) in points.iter().enumerate() {
            let slot = if chain == 1 { 0 } else { i.saturating_sub(1).min(chain - 1) };
            let target = first + slot;
            if let Point::Leg(l) = p {
                vertices[target].legs.push(l);
            }
            at.insert((v, p), target);
        }
        for i in 0..vert.genus {
            spine.push((at[&(v, Point::LoopStart(i))], at[&(v, Point::LoopEnd(i))]));
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(graph.edges.len() + spine.len());
    for (e, &(a, b)) in graph.edges.iter().enumerate() {
        edges.push((at[&(a, Point::Half(e, 0))], at[&(b, Point::Half(e, 1))]));
    }
    edges.extend(spine);
    StableGraph { vertices, edges, labels: graph.labels.clone() }
}
