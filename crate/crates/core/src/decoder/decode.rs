use super::{build_matrix, PerturbedWeights};
use crate::error::{Error, Result};
use crate::graph::PathGraph;
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    /// A validated perfect matching of weight `w*`.
    Matching,
    /// `det B` vanished in the truncated ring: `2w* ≥ w_th`.
    OverflowFailure,
    /// The degree test did not single out a perfect matching: the
    /// perturbation failed to isolate a minimum.
    NotIsolated,
}

impl DecodeStatus {
    pub fn label(self) -> &'static str {
        match self {
            DecodeStatus::Matching => "MATCHING",
            DecodeStatus::OverflowFailure => "OVERFLOW_FAILURE",
            DecodeStatus::NotIsolated => "NOT_ISOLATED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Selected path-graph edges `(u, v)`, `u < v`. Empty on overflow.
    pub matching: Vec<(usize, usize)>,
    /// Half the lowest degree of `det B`; `None` on overflow.
    pub w_star: Option<u64>,
    /// Weight of `matching` under the path graph's unperturbed weights.
    pub weight: Option<u64>,
}

impl DecodeOutcome {
    pub fn overflow() -> Self {
        Self {
            status: DecodeStatus::OverflowFailure,
            matching: Vec::new(),
            w_star: None,
            weight: None,
        }
    }

    pub fn is_matching(&self) -> bool {
        self.status == DecodeStatus::Matching
    }
}

/// How the per-edge minors are obtained.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MinorStrategy {
    /// Every minor at once from the adjugate, reusing the characteristic
    /// polynomial of the determinant step.
    #[default]
    Adjugate,
    /// One independent determinant per path-graph edge, run in parallel.
    PerEdge,
}

/// Lowest degrees computed at a width `W`. Because reduction modulo `X^w` is
/// a ring homomorphism, the outcome at any `w ≤ W` follows by discarding
/// degrees `≥ w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeProfile {
    pub width: usize,
    pub det_min_degree: Option<usize>,
    /// Lowest degree of `minor(u, v) · X^{effective(e)}` per edge.
    pub edge_min_degree: Vec<Option<usize>>,
}

impl DecodeProfile {
    /// Runs the determinant and minor steps at width `w_th`.
    pub fn compute(
        pg: &PathGraph,
        pw: &PerturbedWeights,
        w_th: usize,
        strategy: MinorStrategy,
    ) -> Result<Self> {
        let b = build_matrix(pg, pw, w_th)?;
        if pg.is_empty() {
            return Ok(Self {
                width: w_th,
                det_min_degree: Some(0),
                edge_min_degree: Vec::new(),
            });
        }
        if matching_lower_bound(pg, pw).map_or(true, |lb| lb >= w_th as u64) {
            // The lowest possible degree of det B is already truncated away.
            return Ok(Self {
                width: w_th,
                det_min_degree: None,
                edge_min_degree: vec![None; pg.edges().len()],
            });
        }
        let coeffs = b.characteristic_polynomial();
        let det = super::berkowitz::determinant_from_charpoly(&coeffs);
        let det_min_degree = det.min_degree();
        if det_min_degree.is_none() {
            // Every minor product vanishes as well.
            return Ok(Self {
                width: w_th,
                det_min_degree,
                edge_min_degree: vec![None; pg.edges().len()],
            });
        }
        let shifted = |minor_degree: Option<usize>, eff: u64| {
            minor_degree
                .map(|m| m + eff as usize)
                .filter(|&d| d < w_th)
        };
        let edge_min_degree = match strategy {
            MinorStrategy::Adjugate => {
                let minors = b.minors_from_charpoly(&coeffs);
                pg.edges()
                    .iter()
                    .zip(&pw.effective)
                    .map(|(e, &eff)| shifted(minors.get(e.u, e.v).min_degree(), eff))
                    .collect()
            }
            MinorStrategy::PerEdge => {
                let per_edge = parallel::map_range(pg.edges().len(), |k| {
                    let e = pg.edges()[k];
                    b.minor(e.u, e.v).map(|m| shifted(m.min_degree(), pw.effective[k]))
                });
                per_edge.into_iter().collect::<Result<Vec<_>>>()?
            }
        };
        Ok(Self {
            width: w_th,
            det_min_degree,
            edge_min_degree,
        })
    }

    /// Decode outcome in the ring truncated at `w_th ≤ self.width`.
    pub fn outcome(&self, pg: &PathGraph, pw: &PerturbedWeights, w_th: usize) -> Result<DecodeOutcome> {
        if w_th > self.width {
            return Err(Error::Config(format!(
                "profile computed at width {} cannot answer width {w_th}",
                self.width
            )));
        }
        if pg.is_empty() {
            return Ok(DecodeOutcome {
                status: DecodeStatus::Matching,
                matching: Vec::new(),
                w_star: Some(0),
                weight: Some(0),
            });
        }
        let Some(det_degree) = self.det_min_degree.filter(|&d| d < w_th) else {
            return Ok(DecodeOutcome::overflow());
        };
        if det_degree % 2 == 1 {
            return Err(Error::Internal(format!(
                "lowest degree of det B is odd ({det_degree})"
            )));
        }
        let w_star = (det_degree / 2) as u64;
        let selected: Vec<usize> = self
            .edge_min_degree
            .iter()
            .enumerate()
            .filter(|(_, d)| d.filter(|&d| d < w_th) == Some(det_degree))
            .map(|(k, _)| k)
            .collect();
        let matching: Vec<(usize, usize)> = selected
            .iter()
            .map(|&k| (pg.edges()[k].u, pg.edges()[k].v))
            .collect();
        let effective_total: u64 = selected.iter().map(|&k| pw.effective[k]).sum();
        let status = if is_perfect_matching(pg.order(), &matching) && effective_total == w_star {
            DecodeStatus::Matching
        } else {
            DecodeStatus::NotIsolated
        };
        let weight = Some(selected.iter().map(|&k| pg.edges()[k].weight).sum());
        Ok(DecodeOutcome {
            status,
            matching,
            w_star: Some(w_star),
            weight,
        })
    }
}

/// `Σ_v min_{e ∋ v} effective(e)`, a lower bound on twice the weight of any
/// perfect matching. `None` if some vertex has no incident edge.
fn matching_lower_bound(pg: &PathGraph, pw: &PerturbedWeights) -> Option<u64> {
    let mut lightest = vec![u64::MAX; pg.order()];
    for (e, &w) in pg.edges().iter().zip(&pw.effective) {
        lightest[e.u] = lightest[e.u].min(w);
        lightest[e.v] = lightest[e.v].min(w);
    }
    lightest
        .into_iter()
        .try_fold(0u64, |acc, w| (w != u64::MAX).then(|| acc.saturating_add(w)))
}

/// True when every vertex `0..order` is covered by exactly one pair.
pub fn is_perfect_matching(order: usize, pairs: &[(usize, usize)]) -> bool {
    if pairs.len() * 2 != order {
        return false;
    }
    let mut covered = vec![false; order];
    for &(u, v) in pairs {
        if u >= order || v >= order || u == v || covered[u] || covered[v] {
            return false;
        }
        covered[u] = true;
        covered[v] = true;
    }
    true
}

/// Determinant-based MWPM over F₂[X]/(X^w_th).
///
/// Returns [`DecodeStatus::OverflowFailure`] exactly when `det B` is the
/// zero polynomial, i.e. when the perturbed minimum weight satisfies
/// `2w* ≥ w_th`. When the perturbed minimum is unique and `2w* < w_th` the
/// returned matching is that minimum.
pub fn decode(pg: &PathGraph, pw: &PerturbedWeights, w_th: usize) -> Result<DecodeOutcome> {
    decode_with(pg, pw, w_th, MinorStrategy::default())
}

pub fn decode_with(
    pg: &PathGraph,
    pw: &PerturbedWeights,
    w_th: usize,
    strategy: MinorStrategy,
) -> Result<DecodeOutcome> {
    if pg.order() % 2 == 1 {
        return Err(Error::OddOrder(pg.order()));
    }
    DecodeProfile::compute(pg, pw, w_th, strategy)?.outcome(pg, pw, w_th)
}
