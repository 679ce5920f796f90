use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Detector,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
}

/// A single fault mechanism: it flips one detector (edge to a boundary) or
/// two detectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorEdge {
    pub a: usize,
    pub b: usize,
    /// Summed flip probability of every location behind this edge.
    pub probability: f64,
    /// Integer weight that replaces the discretized one at every scale.
    pub weight_override: Option<u64>,
    /// Bitmask of logical observables flipped by this fault. Not part of the
    /// file format; generated graphs use it for logical-class bookkeeping.
    pub observables: u64,
}

impl DetectorEdge {
    pub fn new(a: usize, b: usize, probability: f64) -> Self {
        Self {
            a,
            b,
            probability,
            weight_override: None,
            observables: 0,
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// Vertices are identified by their index `0..num_vertices`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorGraph {
    kinds: Vec<VertexKind>,
    edges: Vec<DetectorEdge>,
    adjacency: Vec<Vec<usize>>,
}

impl DetectorGraph {
    /// Validates the graph: endpoints in range, no self-loops, every edge
    /// touches a detector and every flip probability lies in (0, 1).
    pub fn new(kinds: Vec<VertexKind>, edges: Vec<DetectorEdge>) -> Result<Self> {
        let n = kinds.len();
        let mut adjacency = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {idx} references a vertex outside 0..{n}"
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("edge {idx} is a self-loop on {}", e.a)));
            }
            if kinds[e.a] == VertexKind::Boundary && kinds[e.b] == VertexKind::Boundary {
                return Err(Error::InvalidGraph(format!(
                    "edge {idx} joins two boundary vertices"
                )));
            }
            if !(e.probability > 0.0 && e.probability < 1.0) {
                return Err(Error::InvalidProbability(e.probability));
            }
            adjacency[e.a].push(idx);
            adjacency[e.b].push(idx);
        }
        Ok(Self {
            kinds,
            edges,
            adjacency,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn is_detector(&self, v: usize) -> bool {
        v < self.kinds.len() && self.kinds[v] == VertexKind::Detector
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.kinds
            .iter()
            .enumerate()
            .map(|(id, &kind)| Vertex { id, kind })
    }

    pub fn detectors(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices()
            .filter(|v| v.kind == VertexKind::Detector)
            .map(|v| v.id)
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors().count()
    }

    pub fn edges(&self) -> &[DetectorEdge] {
        &self.edges
    }

    /// Indices of the edges incident to `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Detectors whose parity is flipped by the given set of faulted edges.
    pub fn syndrome_of(&self, faults: &[usize]) -> Vec<usize> {
        let mut parity = vec![false; self.num_vertices()];
        for &f in faults {
            let e = &self.edges[f];
            parity[e.a] ^= true;
            parity[e.b] ^= true;
        }
        (0..self.num_vertices())
            .filter(|&v| parity[v] && self.kinds[v] == VertexKind::Detector)
            .collect()
    }
}
