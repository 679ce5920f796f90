use std::fmt::Write as _;

use super::{build_surface_detector_graph, derive_seed, sample_shot, NoiseModel, Shot};
use crate::decoder::{default_w_max, RngKind, Scheme};
use crate::error::{Error, Result};
use crate::graph::{scale_for_precision, DetectorGraph, DistanceTable, PathGraph, WeightFunction};
use crate::heuristic::{required_wth_from_weight, TrialSet};
use crate::oracle::{boundary_mwpm, path_graph_mwpm, BoundaryMatching, Pairing, SUBSET_LIMIT};
use crate::parallel;

/// Largest path graph decoded by the threshold sweep; bigger shots are left
/// out of the denominator.
pub const PATH_GRAPH_CAP: usize = 28;

/// Seed streams: shots are shared between sweeps with the same seed.
const SHOT_STREAM: u64 = 0;
const TRIAL_STREAM: u64 = 1;

/// Relative slack when comparing floating-point matching costs.
const COST_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPoint {
    pub axis: String,
    pub value: u64,
    pub trials: u64,
    pub failures: u64,
}

impl SweepPoint {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    /// `sqrt(p̂(1 − p̂)/N)`.
    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.fraction();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub const HEADER: &'static str = "axis,value,trials,failures,stderr";

    pub fn get(&self, axis: &str, value: u64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.axis == axis && p.value == value)
    }

    /// Estimated logical error rate of the reference decoder, if measured.
    pub fn logical_proxy(&self) -> Option<&SweepPoint> {
        self.get("logical_proxy", 0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", Self::HEADER).unwrap();
        for p in &self.points {
            writeln!(s, "{},{},{},{},{:.6e}", p.axis, p.value, p.trials, p.failures, p.stderr()).unwrap();
        }
        s
    }

    fn push(&mut self, axis: impl Into<String>, value: u64, trials: u64, failures: u64) {
        self.points.push(SweepPoint {
            axis: axis.into(),
            value,
            trials,
            failures,
        });
    }
}

/// Full-precision matching with real-valued weights `-ln p`.
#[derive(Debug, Clone)]
pub struct LogicalReference {
    table: DistanceTable<f64>,
}

impl LogicalReference {
    pub fn new(g: &DetectorGraph) -> Self {
        let lengths: Vec<f64> = g.edges().iter().map(|e| -e.probability.ln()).collect();
        Self {
            table: DistanceTable::build(g, |e| lengths[e], None),
        }
    }

    fn pair(&self, active: &[usize], i: usize, j: usize) -> Option<(f64, u64)> {
        self.table.between(active[i], active[j]).expect("active detectors are validated")
    }

    fn boundary(&self, active: &[usize], i: usize) -> Option<(f64, u64)> {
        self.table.to_boundary(active[i]).expect("active detectors are validated")
    }

    pub fn matching(&self, active: &[usize]) -> Result<BoundaryMatching<f64>> {
        validate_active(&self.table, active)?;
        boundary_mwpm(
            active.len(),
            |i, j| self.pair(active, i, j).map(|x| x.0),
            |i| self.boundary(active, i).map(|x| x.0),
        )
    }

    /// Real-valued cost of a pairing of `active`.
    pub fn cost(&self, active: &[usize], pairings: &[Pairing]) -> Option<f64> {
        pairings.iter().try_fold(0.0, |acc, p| {
            let d = match *p {
                Pairing::Pair(i, j) => self.pair(active, i, j)?.0,
                Pairing::Boundary(i) => self.boundary(active, i)?.0,
            };
            Some(acc + d)
        })
    }

    /// Observables flipped by the correction a pairing describes.
    pub fn observables(&self, active: &[usize], pairings: &[Pairing]) -> u64 {
        pairings.iter().fold(0, |m, p| {
            let o = match *p {
                Pairing::Pair(i, j) => self.pair(active, i, j).map_or(0, |x| x.1),
                Pairing::Boundary(i) => self.boundary(active, i).map_or(0, |x| x.1),
            };
            m ^ o
        })
    }

    /// Whether correcting `shot` with the reference matching leaves a
    /// logical error.
    pub fn logical_failure(&self, shot: &Shot) -> Result<bool> {
        let m = self.matching(&shot.active)?;
        Ok(self.observables(&shot.active, &m.pairings) != shot.observables)
    }
}

fn validate_active<L: crate::graph::PathLength + Send + Sync>(table: &DistanceTable<L>, active: &[usize]) -> Result<()> {
    for &d in active {
        table.to_boundary(d)?;
    }
    Ok(())
}

fn integer_table(g: &DetectorGraph, bits: u32) -> Result<DistanceTable<u64>> {
    let wf = WeightFunction::discretize(g, scale_for_precision(g, bits)?)?;
    Ok(DistanceTable::from_weights(g, &wf))
}

fn integer_matching(table: &DistanceTable<u64>, active: &[usize]) -> Result<BoundaryMatching<u64>> {
    boundary_mwpm(
        active.len(),
        |i, j| table.between(active[i], active[j]).ok().flatten().map(|x| x.0),
        |i| table.to_boundary(active[i]).ok().flatten().map(|x| x.0),
    )
}

fn shots<T: Send>(count: u64, seed: u64, f: impl Fn(u64, Shot) -> Result<T> + Sync + Send, g: &DetectorGraph) -> Result<Vec<T>> {
    parallel::map_range(count as usize, |i| {
        let i = i as u64;
        f(i, sample_shot(g, derive_seed(seed, SHOT_STREAM, i)))
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionSweepConfig {
    pub b_values: Vec<u32>,
    pub shots: u64,
    pub seed: u64,
}

/// Fraction of shots whose integer-weight MWPM at precision `b` costs more,
/// under the real-valued weights, than the real-valued MWPM. Shots with more
/// than the exact-solver limit of active detectors are counted as excluded.
pub fn precision_sweep(g: &DetectorGraph, cfg: &PrecisionSweepConfig) -> Result<SweepResult> {
    let reference = LogicalReference::new(g);
    let tables = cfg
        .b_values
        .iter()
        .map(|&b| integer_table(g, b))
        .collect::<Result<Vec<_>>>()?;
    let per_shot = shots(
        cfg.shots,
        cfg.seed,
        |_, shot| -> Result<Option<(Vec<bool>, bool)>> {
            if shot.active.len() > SUBSET_LIMIT {
                return Ok(None);
            }
            let best = reference.matching(&shot.active)?;
            let limit = best.weight * (1.0 + COST_TOLERANCE) + COST_TOLERANCE;
            let mismatches = tables
                .iter()
                .map(|t| {
                    let m = integer_matching(t, &shot.active)?;
                    let cost = reference
                        .cost(&shot.active, &m.pairings)
                        .ok_or_else(|| Error::Internal("integer matching uses an unreachable pair".into()))?;
                    Ok(cost > limit)
                })
                .collect::<Result<Vec<_>>>()?;
            let logical = reference.observables(&shot.active, &best.pairings) != shot.observables;
            Ok(Some((mismatches, logical)))
        },
        g,
    )?;
    let included: Vec<&(Vec<bool>, bool)> = per_shot.iter().flatten().collect();
    let n = included.len() as u64;
    let mut out = SweepResult::default();
    for (k, &b) in cfg.b_values.iter().enumerate() {
        let failures = included.iter().filter(|(m, _)| m[k]).count() as u64;
        out.push("b", b as u64, n, failures);
    }
    out.push("logical_proxy", 0, n, included.iter().filter(|(_, l)| *l).count() as u64);
    out.push("excluded", 0, cfg.shots, cfg.shots - n);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSweepConfig {
    pub w_th_list: Vec<usize>,
    pub k_multipliers: Vec<usize>,
    pub shots: u64,
    pub seed: u64,
    pub b_low: u32,
    pub b_high: u32,
    /// `None` uses `⌈0.8 n^0.8⌉` per path graph.
    pub w_max: Option<u64>,
    pub rng: RngKind,
}

impl Default for ThresholdSweepConfig {
    fn default() -> Self {
        Self {
            w_th_list: vec![128, 256, 384, 512],
            k_multipliers: vec![1, 2, 4, 8],
            shots: 10_000,
            seed: 0,
            b_low: 4,
            b_high: 8,
            w_max: None,
            rng: RngKind::default(),
        }
    }
}

/// Method names used in the `axis` column.
pub const METHODS: [&str; 2] = ["base", "extended"];

fn threshold_axis(method: &str, multiplier: usize) -> String {
    format!("{method}:k{multiplier}:w_th")
}

/// Failure fraction of multi-trial decoding over a grid of widths and trial
/// multipliers, for candidates from the `b_high` graph (`base`) and from the
/// `b_low` graph verified on the `b_high` one (`extended`). A shot fails when
/// no candidate survives or the selected weight exceeds the exact minimum
/// under the `b_high` weights. Every grid point sees the same shots and the
/// same perturbation seeds.
pub fn threshold_sweep(nm: &NoiseModel, cfg: &ThresholdSweepConfig) -> Result<SweepResult> {
    let g = build_surface_detector_graph(nm)?;
    threshold_sweep_on(&g, cfg)
}

pub fn threshold_sweep_on(g: &DetectorGraph, cfg: &ThresholdSweepConfig) -> Result<SweepResult> {
    if cfg.b_low > cfg.b_high {
        return Err(Error::Config("b_low exceeds b_high".into()));
    }
    let width = *cfg
        .w_th_list
        .iter()
        .max()
        .ok_or_else(|| Error::Config("empty w_th list".into()))?;
    if cfg.w_th_list.contains(&0) {
        return Err(Error::ZeroWidth);
    }
    let max_mult = *cfg
        .k_multipliers
        .iter()
        .max()
        .ok_or_else(|| Error::Config("empty K multiplier list".into()))?;
    let reference = LogicalReference::new(g);
    let low = integer_table(g, cfg.b_low)?;
    let high = integer_table(g, cfg.b_high)?;
    let grid = METHODS.len() * cfg.k_multipliers.len() * cfg.w_th_list.len();
    let per_shot = shots(
        cfg.shots,
        cfg.seed,
        |i, shot| -> Result<Option<(Vec<bool>, bool)>> {
            let k = shot.active.len();
            if 2 * k > PATH_GRAPH_CAP {
                return Ok(None);
            }
            let logical = reference.logical_failure(&shot)?;
            if k == 0 {
                return Ok(Some((vec![false; grid], logical)));
            }
            let pg_high = high.path_graph(&shot.active)?;
            let pg_low = low.path_graph(&shot.active)?;
            let best = path_graph_mwpm(&pg_high)?.weight;
            let w_max = cfg.w_max.unwrap_or_else(|| default_w_max(2 * k));
            let count = max_mult * w_max as usize;
            let seed = derive_seed(cfg.seed, TRIAL_STREAM, i);
            let mut fails = Vec::with_capacity(grid);
            for pg in [&pg_high, &pg_low] {
                let set = TrialSet::run(pg, Scheme::Plain, w_max, count, width, seed, cfg.rng)?;
                for &m in &cfg.k_multipliers {
                    for &w in &cfg.w_th_list {
                        let out = set.select(pg, &pg_high, w, m * w_max as usize)?;
                        fails.push(!out.is_matching() || out.weight > Some(best));
                    }
                }
            }
            Ok(Some((fails, logical)))
        },
        g,
    )?;
    let included: Vec<&(Vec<bool>, bool)> = per_shot.iter().flatten().collect();
    let n = included.len() as u64;
    let mut out = SweepResult::default();
    let mut idx = 0;
    for method in METHODS {
        for &m in &cfg.k_multipliers {
            for &w in &cfg.w_th_list {
                let failures = included.iter().filter(|(f, _)| f[idx]).count() as u64;
                out.push(threshold_axis(method, m), w as u64, n, failures);
                idx += 1;
            }
        }
    }
    out.push("logical_proxy", 0, n, included.iter().filter(|(_, l)| *l).count() as u64);
    out.push("excluded", 0, cfg.shots, cfg.shots - n);
    Ok(out)
}

impl SweepResult {
    /// Point of a threshold sweep.
    pub fn threshold_point(&self, method: &str, multiplier: usize, w_th: usize) -> Option<&SweepPoint> {
        self.get(&threshold_axis(method, multiplier), w_th as u64)
    }
}

/// Maxima of the width lower bound `2·(a·w + (n/2)·W_max) + 1` per path
/// graph order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RequiredWthRow {
    pub order: usize,
    pub shots: u64,
    pub amplified_high: u64,
    pub plain_high: u64,
    pub plain_low: u64,
}

impl RequiredWthRow {
    pub const HEADER: &'static str = "n,shots,amplified_high,plain_high,plain_low";

    pub fn to_csv(rows: &[RequiredWthRow]) -> String {
        let mut s = String::new();
        writeln!(s, "{}", Self::HEADER).unwrap();
        for r in rows {
            writeln!(s, "{},{},{},{},{}", r.order, r.shots, r.amplified_high, r.plain_high, r.plain_low).unwrap();
        }
        s
    }
}

/// Samples `shots` shots and records, per path-graph order `n ≤ cap`, the
/// largest required width for the amplified scheme at `b_high` and the
/// plain scheme at `b_high` and `b_low`, with `W_max = ⌈0.8 n^0.8⌉`.
pub fn required_wth_survey(
    nm: &NoiseModel,
    shots_count: u64,
    seed: u64,
    b_low: u32,
    b_high: u32,
    cap: usize,
) -> Result<Vec<RequiredWthRow>> {
    let g = build_surface_detector_graph(nm)?;
    let low = integer_table(&g, b_low)?;
    let high = integer_table(&g, b_high)?;
    let weight = |t: &DistanceTable<u64>, active: &[usize]| -> Result<(PathGraph, u64)> {
        let pg = t.path_graph(active)?;
        let w = path_graph_mwpm(&pg)?.weight;
        Ok((pg, w))
    };
    let per_shot = shots(
        shots_count,
        seed,
        |_, shot| -> Result<Option<RequiredWthRow>> {
            let n = 2 * shot.active.len();
            if n == 0 || n > cap {
                return Ok(None);
            }
            let w_max = default_w_max(n);
            let (_, wh) = weight(&high, &shot.active)?;
            let (_, wl) = weight(&low, &shot.active)?;
            Ok(Some(RequiredWthRow {
                order: n,
                shots: 1,
                amplified_high: required_wth_from_weight(n, wh, Scheme::Amplified, w_max),
                plain_high: required_wth_from_weight(n, wh, Scheme::Plain, w_max),
                plain_low: required_wth_from_weight(n, wl, Scheme::Plain, w_max),
            }))
        },
        &g,
    )?;
    let mut rows: Vec<RequiredWthRow> = (1..=cap / 2)
        .map(|h| RequiredWthRow {
            order: 2 * h,
            shots: 0,
            amplified_high: 0,
            plain_high: 0,
            plain_low: 0,
        })
        .collect();
    for r in per_shot.into_iter().flatten() {
        let row = &mut rows[r.order / 2 - 1];
        row.shots += 1;
        row.amplified_high = row.amplified_high.max(r.amplified_high);
        row.plain_high = row.plain_high.max(r.plain_high);
        row.plain_low = row.plain_low.max(r.plain_low);
    }
    rows.retain(|r| r.shots > 0);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = SweepResult::default();
        r.push("b", 5, 100, 10);
        r.push("logical_proxy", 0, 0, 0);
        assert_eq!(
            r.to_csv(),
            "axis,value,trials,failures,stderr\nb,5,100,10,3.000000e-2\nlogical_proxy,0,0,0,0.000000e0\n"
        );
    }

    #[test]
    fn small_precision_sweep_is_monotone_at_the_top() {
        let g = build_surface_detector_graph(&NoiseModel::new(3, 0.02).unwrap()).unwrap();
        let cfg = PrecisionSweepConfig {
            b_values: vec![2, 12],
            shots: 300,
            seed: 5,
        };
        let r = precision_sweep(&g, &cfg).unwrap();
        assert_eq!(r.get("b", 12).unwrap().failures, 0);
        assert_eq!(r, precision_sweep(&g, &cfg).unwrap());
    }

    #[test]
    fn threshold_sweep_extremes() {
        let nm = NoiseModel::new(3, 0.02).unwrap();
        let cfg = ThresholdSweepConfig {
            w_th_list: vec![1, 4000],
            k_multipliers: vec![1, 8],
            shots: 200,
            seed: 3,
            ..Default::default()
        };
        let r = threshold_sweep(&nm, &cfg).unwrap();
        let n = r.logical_proxy().unwrap().trials;
        let empty = (0..cfg.shots)
            .filter(|&i| sample_shot(&build_surface_detector_graph(&nm).unwrap(), derive_seed(3, SHOT_STREAM, i)).active.is_empty())
            .count() as u64;
        for method in METHODS {
            // width 1 cannot hold any nonzero weight
            assert_eq!(r.threshold_point(method, 1, 1).unwrap().failures, n - empty);
            assert!(r.threshold_point(method, 8, 4000).unwrap().failures <= r.threshold_point(method, 1, 4000).unwrap().failures);
        }
        assert_eq!(r.threshold_point("base", 8, 4000).unwrap().failures, 0);
    }

    #[test]
    fn survey_orders_are_even() {
        let nm = NoiseModel::new(3, 0.03).unwrap();
        let rows = required_wth_survey(&nm, 300, 1, 4, 8, PATH_GRAPH_CAP).unwrap();
        assert!(!rows.is_empty());
        for r in rows {
            assert_eq!(r.order % 2, 0);
            assert!(r.amplified_high > r.plain_high && r.plain_high > r.plain_low);
        }
    }
}
