use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Add;

use super::DetectorGraph;

/// Edge lengths Dijkstra can run on: integer weights or real log-likelihoods.
pub trait PathLength: Copy + PartialOrd + Add<Output = Self> {
    const ZERO: Self;
}

impl PathLength for u64 {
    const ZERO: Self = 0;
}

impl PathLength for f64 {
    const ZERO: Self = 0.0;
}

/// Single-source shortest paths over a detector graph.
#[derive(Debug, Clone)]
pub struct ShortestPaths<L> {
    pub source: usize,
    pub distance: Vec<Option<L>>,
    /// Edge used to reach each vertex on its shortest path.
    pub predecessor: Vec<Option<usize>>,
    /// XOR of edge observables along the shortest path.
    pub observables: Vec<u64>,
}

impl<L: PathLength> ShortestPaths<L> {
    /// Edge indices along the shortest path from the source to `target`,
    /// ordered from the target back to the source.
    pub fn path_edges(&self, graph: &DetectorGraph, target: usize) -> Option<Vec<usize>> {
        self.distance[target]?;
        let mut out = Vec::new();
        let mut v = target;
        while v != self.source {
            let e = self.predecessor[v]?;
            out.push(e);
            v = graph.edges()[e].other(v);
        }
        Some(out)
    }
}

struct Entry<L> {
    dist: L,
    vertex: usize,
}

impl<L: PartialOrd> PartialEq for Entry<L> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<L: PartialOrd> Eq for Entry<L> {}
impl<L: PartialOrd> PartialOrd for Entry<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<L: PartialOrd> Ord for Entry<L> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Binary-heap Dijkstra from `source`. Paths are not continued through
/// boundary vertices: a boundary is always an endpoint of an error chain.
pub fn shortest_paths<L: PathLength>(
    graph: &DetectorGraph,
    edge_length: impl Fn(usize) -> L,
    source: usize,
) -> ShortestPaths<L> {
    let n = graph.num_vertices();
    let mut distance: Vec<Option<L>> = vec![None; n];
    let mut predecessor = vec![None; n];
    let mut observables = vec![0u64; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    distance[source] = Some(L::ZERO);
    heap.push(Entry {
        dist: L::ZERO,
        vertex: source,
    });
    while let Some(Entry { dist, vertex }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        done[vertex] = true;
        if vertex != source && !graph.is_detector(vertex) {
            continue;
        }
        for &e in graph.incident(vertex) {
            let edge = &graph.edges()[e];
            let next = edge.other(vertex);
            if done[next] {
                continue;
            }
            let candidate = dist + edge_length(e);
            let better = match distance[next] {
                None => true,
                Some(current) => candidate < current,
            };
            if better {
                distance[next] = Some(candidate);
                predecessor[next] = Some(e);
                observables[next] = observables[vertex] ^ edge.observables;
                heap.push(Entry {
                    dist: candidate,
                    vertex: next,
                });
            }
        }
    }
    ShortestPaths {
        source,
        distance,
        predecessor,
        observables,
    }
}
