use super::DetectorGraph;
use crate::error::{Error, Result};

/// Relative distance to the nearest integer below which `-C ln p` is treated
/// as that integer before taking the ceiling.
const INTEGER_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// `ceil(-scale · ln p)`, with values within 2^-40 (relative) of an integer
/// snapped to it so the ceiling does not depend on the last ulp of `ln`.
pub fn discretize_probability(probability: f64, scale: u64) -> Result<u64> {
    if !(probability > 0.0 && probability < 1.0) {
        return Err(Error::InvalidProbability(probability));
    }
    let x = -(scale as f64) * probability.ln();
    let nearest = x.round();
    let value = if (x - nearest).abs() <= INTEGER_TOLERANCE * x.abs().max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    Ok((value as u64).max(1))
}

/// Integer edge weights of a detector graph at a fixed scale factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    scale: u64,
    weights: Vec<u64>,
}

impl WeightFunction {
    /// Discretizes every edge of `graph` at scale `C`; edges carrying a
    /// weight override keep it regardless of the scale.
    pub fn discretize(graph: &DetectorGraph, scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Config("scale factor must be at least 1".into()));
        }
        let weights = graph
            .edges()
            .iter()
            .map(|e| match e.weight_override {
                Some(w) => Ok(w.max(1)),
                None => discretize_probability(e.probability, scale),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { scale, weights })
    }

    /// Weights supplied directly, one per edge. Zero weights are rejected.
    pub fn from_weights(scale: u64, weights: Vec<u64>) -> Result<Self> {
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::Config("edge weights must be at least 1".into()));
        }
        Ok(Self { scale, weights })
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn weight(&self, edge: usize) -> u64 {
        self.weights[edge]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.weights.iter().copied().min()
    }
}

/// Smallest scale `C ≥ 1` for which the minimum discretized edge weight has
/// at least `bits` significant binary digits (is at least `2^(bits-1)`).
pub fn scale_for_precision(graph: &DetectorGraph, bits: u32) -> Result<u64> {
    if bits == 0 || bits > 62 {
        return Err(Error::Config(format!("precision of {bits} bits is out of range")));
    }
    let target = 1u64 << (bits - 1);
    let free: Vec<f64> = graph
        .edges()
        .iter()
        .filter(|e| e.weight_override.is_none())
        .map(|e| e.probability)
        .collect();
    if free.is_empty() {
        // Overrides are scale-independent.
        return Ok(1);
    }
    let minimum_at = |scale: u64| -> Result<u64> {
        free.iter()
            .map(|&p| discretize_probability(p, scale))
            .try_fold(u64::MAX, |acc, w| w.map(|w| acc.min(w)))
    };
    // The weight of the most likely edge grows linearly in C, so start just
    // below the analytic crossing and walk upwards.
    let max_p = free.iter().copied().fold(0.0f64, f64::max);
    let slope = -max_p.ln();
    let mut scale = ((target as f64 - 1.0) / slope).floor().max(1.0) as u64;
    while scale > 1 && minimum_at(scale - 1)? >= target {
        scale -= 1;
    }
    while minimum_at(scale)? < target {
        scale += 1;
    }
    Ok(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DetectorEdge, VertexKind};

    fn graph_with(probs: &[f64]) -> DetectorGraph {
        let mut kinds = vec![VertexKind::Boundary];
        let mut edges = Vec::new();
        for (k, &p) in probs.iter().enumerate() {
            kinds.push(VertexKind::Detector);
            edges.push(DetectorEdge::new(k + 1, 0, p));
        }
        DetectorGraph::new(kinds, edges).unwrap()
    }

    /// Linear search from C = 1 using the same rounding rule.
    fn brute_scale(probs: &[f64], bits: u32) -> u64 {
        let target = 1u64 << (bits - 1);
        (1u64..)
            .find(|&c| {
                probs
                    .iter()
                    .map(|&p| discretize_probability(p, c).unwrap())
                    .min()
                    .unwrap()
                    >= target
            })
            .unwrap()
    }

    #[test]
    fn discretize_examples() {
        assert_eq!(discretize_probability((-3.0f64).exp(), 1).unwrap(), 3);
        assert_eq!(discretize_probability(1e-3, 1).unwrap(), 7);
        assert_eq!(discretize_probability(0.5, 10).unwrap(), 7);
    }

    #[test]
    fn discretize_rejects_out_of_range() {
        for p in [0.0, 1.0, 1.5, -0.1, f64::NAN] {
            assert!(discretize_probability(p, 1).is_err());
        }
    }

    #[test]
    fn exact_integer_logs_do_not_round_up() {
        for k in 1..40 {
            let p = (-(k as f64)).exp();
            assert_eq!(discretize_probability(p, 1).unwrap(), k);
            assert_eq!(discretize_probability(p, 3).unwrap(), 3 * k);
        }
    }

    #[test]
    fn scale_for_precision_examples() {
        assert_eq!(scale_for_precision(&graph_with(&[(-1.0f64).exp()]), 3).unwrap(), 4);
        assert_eq!(scale_for_precision(&graph_with(&[(-8.0f64).exp()]), 4).unwrap(), 1);
        assert_eq!(scale_for_precision(&graph_with(&[1e-3]), 8).unwrap(), 19);
    }

    #[test]
    fn scale_for_precision_matches_linear_search() {
        let sets: [&[f64]; 4] = [&[1e-3, 2e-3], &[0.01, 0.3, 1e-5], &[0.49], &[1e-9, 0.2]];
        for probs in sets {
            for bits in 1..=12 {
                assert_eq!(
                    scale_for_precision(&graph_with(probs), bits).unwrap(),
                    brute_scale(probs, bits),
                    "{probs:?} b={bits}"
                );
            }
        }
    }

    #[test]
    fn discretize_is_monotone_in_scale() {
        let g = graph_with(&[1e-3, 0.02, 0.4, 1e-7]);
        let mut prev = WeightFunction::discretize(&g, 1).unwrap();
        for c in 2..200 {
            let next = WeightFunction::discretize(&g, c).unwrap();
            for (a, b) in prev.weights().iter().zip(next.weights()) {
                assert!(b >= a);
            }
            prev = next;
        }
    }

    #[test]
    fn overrides_survive_discretization() {
        let mut g = graph_with(&[0.1, 0.2]);
        let mut edges = g.edges().to_vec();
        edges[1].weight_override = Some(42);
        g = DetectorGraph::new(vec![VertexKind::Boundary, VertexKind::Detector, VertexKind::Detector], edges).unwrap();
        let wf = WeightFunction::discretize(&g, 5).unwrap();
        assert_eq!(wf.weight(1), 42);
        assert_eq!(wf.weight(0), 12);
    }
}
