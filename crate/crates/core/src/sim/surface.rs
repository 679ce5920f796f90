use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DetectorEdge, DetectorGraph, VertexKind};

/// Phenomenological noise on a distance-`d` rotated surface-code memory:
/// each data qubit suffers an X flip with probability `p` before every
/// round, and each stabilizer measurement but the last is wrong with
/// probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub d: usize,
    pub rounds: usize,
    pub p: f64,
}

impl NoiseModel {
    pub const DEFAULT_P: f64 = 1e-3;

    /// `rounds = d`.
    pub fn new(d: usize, p: f64) -> Result<Self> {
        Self::with_rounds(d, d, p)
    }

    pub fn with_rounds(d: usize, rounds: usize, p: f64) -> Result<Self> {
        let nm = Self { d, rounds, p };
        nm.validate()?;
        Ok(nm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 || self.d % 2 == 0 {
            return Err(Error::Config(format!("code distance must be odd and at least 3, got {}", self.d)));
        }
        if self.rounds == 0 {
            return Err(Error::Config("at least one round is required".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidProbability(self.p));
        }
        Ok(())
    }
}

/// A generated detector graph with the geometry of each detector.
#[derive(Debug, Clone)]
pub struct SurfaceLayout {
    pub graph: DetectorGraph,
    /// `(row, col, round)` of each detector in plaquette coordinates
    /// (`0..=d` each way); the boundary vertex is last and has no entry.
    pub coordinates: Vec<(usize, usize, usize)>,
    pub boundary: usize,
    pub detectors_per_round: usize,
}

/// Z-type plaquettes `(i, j)`, `i, j ∈ 0..=d`, covering data qubits
/// `(i-1..=i) × (j-1..=j)`: the bulk ones with `i + j` even and the
/// weight-two ones on the left and right edges.
fn z_plaquettes(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let even = (i + j) % 2 == 0;
            let bulk = (1..d).contains(&i) && (1..d).contains(&j);
            let side = (j == 0 || j == d) && (1..d).contains(&i);
            if even && (bulk || side) {
                out.push((i, j));
            }
        }
    }
    out
}

impl SurfaceLayout {
    pub fn new(nm: &NoiseModel) -> Result<Self> {
        nm.validate()?;
        let d = nm.d;
        let plaquettes = z_plaquettes(d);
        let per_round = plaquettes.len();
        let index: BTreeMap<(usize, usize), usize> =
            plaquettes.iter().enumerate().map(|(k, &ij)| (ij, k)).collect();

        // Data qubit (r, c) is flipped into the Z plaquettes that contain it;
        // qubits with the same footprint are merged by summing probabilities.
        // Observable: the logical Z along row 0.
        let mut footprints: BTreeMap<(usize, Option<usize>), (usize, u64)> = BTreeMap::new();
        for r in 0..d {
            for c in 0..d {
                let hits: Vec<usize> = [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)]
                    .iter()
                    .filter_map(|ij| index.get(ij).copied())
                    .collect();
                let key = match hits.as_slice() {
                    [a] => (*a, None),
                    [a, b] => (*a.min(b), Some(*a.max(b))),
                    _ => return Err(Error::Internal(format!("data qubit ({r}, {c}) touches {} plaquettes", hits.len()))),
                };
                let obs = u64::from(r == 0);
                let slot = footprints.entry(key).or_insert((0, obs));
                if slot.1 != obs {
                    return Err(Error::Internal("merged faults disagree on the observable".into()));
                }
                slot.0 += 1;
            }
        }

        let boundary = nm.rounds * per_round;
        let mut kinds = vec![VertexKind::Detector; boundary];
        kinds.push(VertexKind::Boundary);
        let mut edges = Vec::new();
        for t in 0..nm.rounds {
            let base = t * per_round;
            for (&(a, b), &(count, obs)) in &footprints {
                let mut e = DetectorEdge::new(base + a, b.map_or(boundary, |b| base + b), count as f64 * nm.p);
                e.observables = obs;
                edges.push(e);
            }
            if t + 1 < nm.rounds {
                for k in 0..per_round {
                    edges.push(DetectorEdge::new(base + k, base + per_round + k, nm.p));
                }
            }
        }
        let coordinates = (0..nm.rounds)
            .flat_map(|t| plaquettes.iter().map(move |&(i, j)| (i, j, t)))
            .collect();
        Ok(Self {
            graph: DetectorGraph::new(kinds, edges)?,
            coordinates,
            boundary,
            detectors_per_round: per_round,
        })
    }
}

/// Detector graph of a rotated surface-code memory experiment under `nm`.
pub fn build_surface_detector_graph(nm: &NoiseModel) -> Result<DetectorGraph> {
    Ok(SurfaceLayout::new(nm)?.graph)
}
