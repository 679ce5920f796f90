//! Bit-length reductions: unamplified perturbation with selection by true
//! weight over several trials, and candidate generation at a coarse weight
//! precision with verification at a fine one.

use crate::decoder::{
    amplification_factor, default_w_max, perturb_with, DecodeOutcome, DecodeProfile, DecodeStatus,
    MinorStrategy, PerturbedWeights, RngKind, Scheme,
};
use crate::error::{Error, Result};
use crate::graph::{build_path_graph, scale_for_precision, DetectorGraph, PathGraph, WeightFunction};
use crate::oracle::{exhaustive_mwpm, path_graph_mwpm, EXHAUSTIVE_LIMIT, SUBSET_LIMIT};
use crate::parallel;

/// Number of perturbation trials per decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialCount {
    Fixed(usize),
    /// `multiplier · W_max` trials.
    PerWMax(usize),
}

impl TrialCount {
    pub fn resolve(self, w_max: u64) -> usize {
        match self {
            TrialCount::Fixed(k) => k,
            TrialCount::PerWMax(m) => m * w_max as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub w_th: usize,
    pub trials: TrialCount,
    /// Perturbation range; `None` uses `⌈0.8 n^0.8⌉` for the decoded graph.
    pub w_max: Option<u64>,
    pub b_low: u32,
    pub b_high: u32,
    pub base_seed: u64,
    pub rng: RngKind,
    /// Stop at the first candidate instead of running every trial.
    pub early_exit: bool,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            w_th: 512,
            trials: TrialCount::PerWMax(8),
            w_max: None,
            b_low: 4,
            b_high: 8,
            base_seed: 0,
            rng: RngKind::default(),
            early_exit: false,
        }
    }
}

impl HeuristicConfig {
    pub fn w_max_for(&self, order: usize) -> u64 {
        self.w_max.unwrap_or_else(|| default_w_max(order))
    }

    pub fn validate(&self) -> Result<()> {
        if self.w_th == 0 {
            return Err(Error::ZeroWidth);
        }
        if self.w_max == Some(0) {
            return Err(Error::Config("W_max must be at least 1".into()));
        }
        if self.b_low == 0 || self.b_high == 0 {
            return Err(Error::Config("binary precisions must be at least 1".into()));
        }
        if self.b_low > self.b_high {
            return Err(Error::Config(format!(
                "b_low ({}) exceeds b_high ({})",
                self.b_low, self.b_high
            )));
        }
        Ok(())
    }
}

/// Total weight of `matching` in `pg`.
pub fn matching_weight(matching: &[(usize, usize)], pg: &PathGraph) -> Result<u64> {
    matching
        .iter()
        .map(|&(u, v)| pg.weight(u, v).ok_or(Error::MissingEdge(u, v)))
        .sum()
}

/// One decode per perturbation seed `base_seed + t`, all at a common width.
/// Outcomes at any smaller width or trial prefix are read off without
/// recomputation.
#[derive(Debug, Clone)]
pub struct TrialSet {
    pub width: usize,
    pub w_max: u64,
    trials: Vec<(PerturbedWeights, DecodeProfile)>,
}

impl TrialSet {
    pub fn run(
        pg: &PathGraph,
        scheme: Scheme,
        w_max: u64,
        count: usize,
        width: usize,
        base_seed: u64,
        rng: RngKind,
    ) -> Result<Self> {
        let trials = parallel::map_range(count, |t| {
            let pw = perturb_with(pg, scheme, w_max, base_seed.wrapping_add(t as u64), rng)?;
            let profile = DecodeProfile::compute(pg, &pw, width, MinorStrategy::Adjugate)?;
            Ok((pw, profile))
        });
        Ok(Self {
            width,
            w_max,
            trials: trials.into_iter().collect::<Result<_>>()?,
        })
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    /// Outcome of trial `t` at width `w_th`.
    pub fn outcome(&self, pg: &PathGraph, t: usize, w_th: usize) -> Result<DecodeOutcome> {
        let (pw, profile) = &self.trials[t];
        profile.outcome(pg, pw, w_th)
    }

    /// Best candidate among the first `k` trials, scored by weight in
    /// `pg_eval` (same vertices as `pg`). Ties go to the lowest trial.
    pub fn select(&self, pg: &PathGraph, pg_eval: &PathGraph, w_th: usize, k: usize) -> Result<DecodeOutcome> {
        let mut best: Option<DecodeOutcome> = None;
        for t in 0..k.min(self.trials.len()) {
            let Some(candidate) = score(self.outcome(pg, t, w_th)?, pg_eval)? else {
                continue;
            };
            if best.as_ref().map_or(true, |b| candidate.weight < b.weight) {
                best = Some(candidate);
            }
        }
        Ok(best.unwrap_or_else(DecodeOutcome::overflow))
    }
}

/// Rescores a validated matching in `pg_eval`; `None` for non-candidates.
fn score(outcome: DecodeOutcome, pg_eval: &PathGraph) -> Result<Option<DecodeOutcome>> {
    if outcome.status != DecodeStatus::Matching {
        return Ok(None);
    }
    let weight = matching_weight(&outcome.matching, pg_eval).map_err(|e| match e {
        Error::MissingEdge(u, v) => Error::Internal(format!("candidate edge ({u}, {v}) missing from the verification graph")),
        other => other,
    })?;
    Ok(Some(DecodeOutcome {
        weight: Some(weight),
        ..outcome
    }))
}

fn run_trials(pg: &PathGraph, pg_eval: &PathGraph, cfg: &HeuristicConfig) -> Result<DecodeOutcome> {
    cfg.validate()?;
    if pg.order() != pg_eval.order() {
        return Err(Error::Internal("candidate and verification graphs differ in order".into()));
    }
    let w_max = cfg.w_max_for(pg.order());
    let k = cfg.trials.resolve(w_max);
    if cfg.early_exit {
        for t in 0..k {
            let set = TrialSet::run(pg, Scheme::Plain, w_max, 1, cfg.w_th, cfg.base_seed.wrapping_add(t as u64), cfg.rng)?;
            if let Some(c) = score(set.outcome(pg, 0, cfg.w_th)?, pg_eval)? {
                return Ok(c);
            }
        }
        return Ok(DecodeOutcome::overflow());
    }
    TrialSet::run(pg, Scheme::Plain, w_max, k, cfg.w_th, cfg.base_seed, cfg.rng)?.select(pg, pg_eval, cfg.w_th, k)
}

/// `K` unamplified perturbations of `pg_high`; returns the candidate of least
/// unperturbed weight, or an overflow failure when no trial yields one.
pub fn multi_trial_decode(pg_high: &PathGraph, cfg: &HeuristicConfig) -> Result<DecodeOutcome> {
    run_trials(pg_high, pg_high, cfg)
}

/// Candidates generated on `pg_low`, scored on `pg_high`.
pub fn variable_precision_decode_paths(
    pg_low: &PathGraph,
    pg_high: &PathGraph,
    cfg: &HeuristicConfig,
) -> Result<DecodeOutcome> {
    run_trials(pg_low, pg_high, cfg)
}

/// Builds both path graphs from scale factors for `b_low` and `b_high` bits
/// and runs [`variable_precision_decode_paths`].
pub fn variable_precision_decode(g: &DetectorGraph, active: &[usize], cfg: &HeuristicConfig) -> Result<DecodeOutcome> {
    cfg.validate()?;
    let build = |bits| -> Result<PathGraph> {
        let wf = WeightFunction::discretize(g, scale_for_precision(g, bits)?)?;
        build_path_graph(g, &wf, active)
    };
    let pg_low = build(cfg.b_low)?;
    let pg_high = build(cfg.b_high)?;
    variable_precision_decode_paths(&pg_low, &pg_high, cfg)
}

/// `2·(a·w_MWPM + (n/2)·W_max) + 1` with `a = C̃` for the amplified scheme
/// and 1 otherwise.
pub fn required_wth_from_weight(order: usize, mwpm_weight: u64, scheme: Scheme, w_max: u64) -> u64 {
    let a = match scheme {
        Scheme::Amplified => amplification_factor(order, w_max),
        Scheme::Plain => 1,
    };
    2 * (a * mwpm_weight + (order as u64 / 2) * w_max) + 1
}

/// Lower bound on the width needed to represent the perturbed minimum with
/// every perturbation at `W_max`.
pub fn required_wth_bound(pg: &PathGraph, scheme: Scheme, w_max: u64) -> Result<u64> {
    let weight = match pg.active_detectors() {
        Some(k) if k <= SUBSET_LIMIT => path_graph_mwpm(pg)?.weight,
        _ if pg.order() <= EXHAUSTIVE_LIMIT => exhaustive_mwpm(pg)?.weight,
        _ => {
            return Err(Error::TooLarge {
                order: pg.order(),
                limit: EXHAUSTIVE_LIMIT,
            })
        }
    };
    Ok(required_wth_from_weight(pg.order(), weight, scheme, w_max))
}
