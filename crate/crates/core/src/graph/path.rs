use super::{shortest_paths, DetectorGraph, PathLength, ShortestPaths, WeightFunction};
use crate::error::{Error, Result};
use crate::parallel;

/// A vertex of a path graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathVertex {
    /// An active detector, by detector-graph id.
    Detector(usize),
    /// The private boundary copy of the given active detector.
    BoundaryCopy(usize),
}

impl std::fmt::Display for PathVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathVertex::Detector(d) => write!(f, "{d}"),
            PathVertex::BoundaryCopy(d) => write!(f, "b{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
    /// Logical observables flipped by the error chain this edge stands for.
    pub observables: u64,
}

/// The weighted graph handed to the matching decoders.
///
/// When built from a detector graph with `k` active detectors, vertices
/// `0..k` are the detectors (ascending id) and `k..2k` their boundary copies
/// in the same order. Edges are stored with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGraph {
    vertices: Vec<PathVertex>,
    edges: Vec<PathEdge>,
    lookup: Vec<Option<u32>>,
    scale: Option<u64>,
    active: Option<usize>,
}

impl PathGraph {
    /// A general weighted graph on `order` vertices, used for graphs that
    /// do not come from a detector graph. Parallel edges keep the lightest.
    pub fn from_edges(order: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut list: Vec<PathEdge> = Vec::with_capacity(edges.len());
        for &(a, b, w) in edges {
            if a >= order || b >= order || a == b {
                return Err(Error::InvalidGraph(format!("bad path-graph edge ({a}, {b})")));
            }
            list.push(PathEdge {
                u: a.min(b),
                v: a.max(b),
                weight: w,
                observables: 0,
            });
        }
        list.sort_by_key(|e| (e.u, e.v, e.weight));
        list.dedup_by_key(|e| (e.u, e.v));
        let vertices = (0..order).map(PathVertex::Detector).collect();
        Ok(Self::assemble(vertices, list, None, None))
    }

    fn assemble(
        vertices: Vec<PathVertex>,
        edges: Vec<PathEdge>,
        scale: Option<u64>,
        active: Option<usize>,
    ) -> Self {
        let n = vertices.len();
        let mut lookup = vec![None; n * n];
        for (idx, e) in edges.iter().enumerate() {
            lookup[e.u * n + e.v] = Some(idx as u32);
            lookup[e.v * n + e.u] = Some(idx as u32);
        }
        Self {
            vertices,
            edges,
            lookup,
            scale,
            active,
        }
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[PathVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[PathEdge] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.order();
        if u >= n || v >= n {
            return None;
        }
        self.lookup[u * n + v].map(|i| i as usize)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.edge_index(u, v).map(|i| self.edges[i].weight)
    }

    /// Scale factor of the weight function that produced the weights.
    pub fn scale(&self) -> Option<u64> {
        self.scale
    }

    /// Number of active detectors, when the graph has the detector +
    /// boundary-copy layout.
    pub fn active_detectors(&self) -> Option<usize> {
        self.active
    }

    /// Copy of this graph with the same vertices and edges but new weights
    /// (indexed like [`PathGraph::edges`]).
    pub fn with_weights(&self, weights: &[u64]) -> Self {
        assert_eq!(weights.len(), self.edges.len());
        let mut out = self.clone();
        for (e, &w) in out.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        out
    }
}

/// Single-source shortest paths from every detector of a graph under one
/// weight function, reused across shots.
#[derive(Debug, Clone)]
pub struct DistanceTable<L> {
    row_of: Vec<Option<usize>>,
    rows: Vec<ShortestPaths<L>>,
    boundary: Vec<Option<(L, u64)>>,
    scale: Option<u64>,
}

impl<L: PathLength + Send + Sync> DistanceTable<L> {
    pub fn build(
        graph: &DetectorGraph,
        edge_length: impl Fn(usize) -> L + Sync,
        scale: Option<u64>,
    ) -> Self {
        let detectors: Vec<usize> = graph.detectors().collect();
        let mut row_of = vec![None; graph.num_vertices()];
        for (r, &d) in detectors.iter().enumerate() {
            row_of[d] = Some(r);
        }
        let rows: Vec<ShortestPaths<L>> =
            parallel::map(&detectors, |&d| shortest_paths(graph, &edge_length, d));
        let boundary = rows.iter().map(|sp| nearest_boundary(graph, sp)).collect();
        Self {
            row_of,
            rows,
            boundary,
            scale,
        }
    }

    fn row(&self, detector: usize) -> Result<&ShortestPaths<L>> {
        self.row_of
            .get(detector)
            .copied()
            .flatten()
            .map(|r| &self.rows[r])
            .ok_or(Error::NotADetector(detector))
    }

    /// Shortest distance and observable parity between two detectors.
    pub fn between(&self, a: usize, b: usize) -> Result<Option<(L, u64)>> {
        let sp = self.row(a)?;
        self.row(b)?;
        Ok(sp.distance[b].map(|d| (d, sp.observables[b])))
    }

    /// Shortest distance (and parity) from a detector to any boundary vertex.
    pub fn to_boundary(&self, detector: usize) -> Result<Option<(L, u64)>> {
        self.row(detector)?;
        Ok(self.boundary[self.row_of[detector].unwrap()])
    }

    /// Shortest-path tree rooted at a detector, for expanding matched edges
    /// back into detector-graph edges.
    pub fn paths_from(&self, detector: usize) -> Result<&ShortestPaths<L>> {
        self.row(detector)
    }
}

fn nearest_boundary<L: PathLength>(graph: &DetectorGraph, sp: &ShortestPaths<L>) -> Option<(L, u64)> {
    let mut best: Option<(L, u64)> = None;
    for v in graph.vertices() {
        if v.kind != super::VertexKind::Boundary {
            continue;
        }
        if let Some(d) = sp.distance[v.id] {
            if best.map_or(true, |(b, _)| d < b) {
                best = Some((d, sp.observables[v.id]));
            }
        }
    }
    best
}

impl DistanceTable<u64> {
    pub fn from_weights(graph: &DetectorGraph, weights: &WeightFunction) -> Self {
        Self::build(graph, |e| weights.weight(e), Some(weights.scale()))
    }

    /// Path graph for a set of active detectors, read from the table.
    pub fn path_graph(&self, active: &[usize]) -> Result<PathGraph> {
        let active = normalize_active(active, |d| self.row(d).is_ok())?;
        assemble_path_graph(
            &active,
            |i, j| self.between(active[i], active[j]).expect("validated detector"),
            |i| self.to_boundary(active[i]).expect("validated detector"),
            self.scale,
        )
    }
}

fn normalize_active(active: &[usize], is_detector: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
    let mut out = active.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&d| !is_detector(d)) {
        return Err(Error::NotADetector(bad));
    }
    Ok(out)
}

fn assemble_path_graph(
    active: &[usize],
    pair: impl Fn(usize, usize) -> Option<(u64, u64)>,
    boundary: impl Fn(usize) -> Option<(u64, u64)>,
    scale: Option<u64>,
) -> Result<PathGraph> {
    let k = active.len();
    let mut vertices: Vec<PathVertex> = active.iter().map(|&d| PathVertex::Detector(d)).collect();
    vertices.extend(active.iter().map(|&d| PathVertex::BoundaryCopy(d)));
    let mut edges = Vec::new();
    for i in 0..k {
        let mut reachable = false;
        for j in (i + 1)..k {
            if let Some((weight, observables)) = pair(i, j) {
                edges.push(PathEdge {
                    u: i,
                    v: j,
                    weight,
                    observables,
                });
            }
        }
        for j in 0..k {
            reachable |= j != i && pair(i.min(j), i.max(j)).is_some();
        }
        if let Some((weight, observables)) = boundary(i) {
            reachable = true;
            edges.push(PathEdge {
                u: i,
                v: k + i,
                weight,
                observables,
            });
        }
        if !reachable {
            return Err(Error::UnreachableDetector(active[i]));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            edges.push(PathEdge {
                u: k + i,
                v: k + j,
                weight: 0,
                observables: 0,
            });
        }
    }
    edges.sort_by_key(|e| (e.u, e.v));
    Ok(PathGraph::assemble(vertices, edges, scale, Some(k)))
}

/// Path graph for `active` computed directly: one Dijkstra per active
/// detector (in parallel), no shared table.
pub fn build_path_graph(
    graph: &DetectorGraph,
    weights: &WeightFunction,
    active: &[usize],
) -> Result<PathGraph> {
    let active = normalize_active(active, |d| graph.is_detector(d))?;
    let trees: Vec<ShortestPaths<u64>> =
        parallel::map(&active, |&d| shortest_paths(graph, |e| weights.weight(e), d));
    assemble_path_graph(
        &active,
        |i, j| trees[i].distance[active[j]].map(|d| (d, trees[i].observables[active[j]])),
        |i| nearest_boundary(graph, &trees[i]),
        Some(weights.scale()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DetectorEdge, VertexKind};

    /// 3×3 grid of detectors; the left column also touches a boundary.
    fn grid() -> (DetectorGraph, WeightFunction) {
        let mut kinds = vec![VertexKind::Detector; 9];
        kinds.push(VertexKind::Boundary);
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        let mut w = 1u64;
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c + 1 < 3 {
                    edges.push(DetectorEdge::new(v, v + 1, 0.01));
                    weights.push(w);
                    w = w % 5 + 1;
                }
                if r + 1 < 3 {
                    edges.push(DetectorEdge::new(v, v + 3, 0.01));
                    weights.push(w);
                    w = w % 5 + 1;
                }
                if c == 0 {
                    edges.push(DetectorEdge::new(v, 9, 0.01));
                    weights.push(7);
                }
            }
        }
        let g = DetectorGraph::new(kinds, edges).unwrap();
        let wf = WeightFunction::from_weights(1, weights).unwrap();
        (g, wf)
    }

    fn floyd_warshall(g: &DetectorGraph, wf: &WeightFunction) -> Vec<Vec<Option<u64>>> {
        let n = g.num_vertices();
        let mut d = vec![vec![None; n]; n];
        for v in 0..n {
            d[v][v] = Some(0);
        }
        for (i, e) in g.edges().iter().enumerate() {
            let w = wf.weight(i);
            for (a, b) in [(e.a, e.b), (e.b, e.a)] {
                if d[a][b].map_or(true, |x| w < x) {
                    d[a][b] = Some(w);
                }
            }
        }
        // boundaries are endpoints only, never intermediate
        for m in (0..n).filter(|&m| g.is_detector(m)) {
            for a in 0..n {
                for b in 0..n {
                    if let (Some(x), Some(y)) = (d[a][m], d[m][b]) {
                        if d[a][b].map_or(true, |z| x + y < z) {
                            d[a][b] = Some(x + y);
                        }
                    }
                }
            }
        }
        d
    }

    #[test]
    fn empty_active_set_gives_empty_graph() {
        let (g, wf) = grid();
        let pg = build_path_graph(&g, &wf, &[]).unwrap();
        assert_eq!(pg.order(), 0);
        assert!(pg.edges().is_empty());
    }

    #[test]
    fn single_detector_pairs_with_its_boundary_copy() {
        let kinds = vec![VertexKind::Detector, VertexKind::Boundary];
        let g = DetectorGraph::new(kinds, vec![DetectorEdge::new(0, 1, 0.1)]).unwrap();
        let wf = WeightFunction::from_weights(1, vec![5]).unwrap();
        let pg = build_path_graph(&g, &wf, &[0]).unwrap();
        assert_eq!(pg.order(), 2);
        assert_eq!(pg.edges().len(), 1);
        assert_eq!(pg.weight(0, 1), Some(5));
    }

    #[test]
    fn grid_distances_match_floyd_warshall() {
        let (g, wf) = grid();
        let fw = floyd_warshall(&g, &wf);
        let table = DistanceTable::from_weights(&g, &wf);
        for a in 0..9 {
            for b in (a + 1)..9 {
                let pg = build_path_graph(&g, &wf, &[a, b]).unwrap();
                assert_eq!(pg.weight(0, 1), fw[a][b], "pair {a},{b}");
                assert_eq!(pg.weight(0, 2), fw[a][9]);
                assert_eq!(pg.weight(1, 3), fw[b][9]);
                assert_eq!(pg.weight(2, 3), Some(0));
                assert_eq!(table.path_graph(&[b, a]).unwrap(), pg);
            }
        }
    }

    #[test]
    fn order_is_even_and_triangle_inequality_holds() {
        let (g, wf) = grid();
        let pg = build_path_graph(&g, &wf, &[0, 4, 8, 5, 2]).unwrap();
        assert_eq!(pg.order(), 10);
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let ab = pg.weight(a, b).unwrap();
                    let bc = pg.weight(b, c).unwrap();
                    let ac = pg.weight(a, c).unwrap();
                    assert!(ac <= ab + bc);
                }
            }
        }
    }

    #[test]
    fn rejects_non_detectors_and_isolated_detectors() {
        let (g, wf) = grid();
        assert_eq!(build_path_graph(&g, &wf, &[9]), Err(Error::NotADetector(9)));
        let kinds = vec![VertexKind::Detector, VertexKind::Detector, VertexKind::Boundary];
        let g = DetectorGraph::new(kinds, vec![DetectorEdge::new(1, 2, 0.1)]).unwrap();
        let wf = WeightFunction::from_weights(1, vec![1]).unwrap();
        assert_eq!(
            build_path_graph(&g, &wf, &[0, 1]),
            Err(Error::UnreachableDetector(0))
        );
    }

    #[test]
    fn expanded_paths_sum_to_distance() {
        let (g, wf) = grid();
        let table = DistanceTable::from_weights(&g, &wf);
        let sp = table.paths_from(0).unwrap();
        for t in 0..9 {
            let edges = sp.path_edges(&g, t).unwrap();
            let total: u64 = edges.iter().map(|&e| wf.weight(e)).sum();
            assert_eq!(Some(total), sp.distance[t]);
        }
    }
}
