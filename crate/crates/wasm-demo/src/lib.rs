//! Browser bindings: sample a surface-code shot, decode it at a chosen bit
//! length, inspect the determinant bits and explore required widths.

use polymatch::decoder::{build_matrix, default_w_max, perturb, Scheme};
use polymatch::graph::{scale_for_precision, DistanceTable, PathGraph, PathVertex};
use polymatch::heuristic::{required_wth_from_weight, variable_precision_decode_paths, HeuristicConfig, TrialCount};
use polymatch::oracle::path_graph_mwpm;
use polymatch::sim::{derive_seed, sample_shot, NoiseModel, SurfaceLayout};
use polymatch::{Result, WeightFunction};
use wasm_bindgen::prelude::*;

/// Marks the boundary in flattened pair lists.
pub const BOUNDARY: u32 = u32::MAX;

fn js(e: polymatch::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn table(layout: &SurfaceLayout, bits: u32) -> Result<DistanceTable<u64>> {
    let g = &layout.graph;
    let wf = WeightFunction::discretize(g, scale_for_precision(g, bits)?)?;
    Ok(DistanceTable::from_weights(g, &wf))
}

#[wasm_bindgen]
pub struct Demo {
    layout: SurfaceLayout,
    low: DistanceTable<u64>,
    high: DistanceTable<u64>,
}

#[wasm_bindgen]
pub struct DecodeView {
    status: String,
    w_star: f64,
    weight: f64,
    best: f64,
    pairs: Vec<u32>,
    order: u32,
    required_plain: f64,
    required_amplified: f64,
}

#[wasm_bindgen]
impl DecodeView {
    /// `MATCHING`, `OVERFLOW_FAILURE` or `NOT_ISOLATED`.
    #[wasm_bindgen(getter)]
    pub fn status(&self) -> String {
        self.status.clone()
    }

    /// −1 when no candidate survived.
    #[wasm_bindgen(getter)]
    pub fn w_star(&self) -> f64 {
        self.w_star
    }

    /// Weight of the selected matching at the high precision, or −1.
    #[wasm_bindgen(getter)]
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Exact minimum weight at the high precision.
    #[wasm_bindgen(getter)]
    pub fn best(&self) -> f64 {
        self.best
    }

    /// Matched detector pairs, flattened; [`BOUNDARY`] stands for the boundary.
    #[wasm_bindgen(getter)]
    pub fn pairs(&self) -> Vec<u32> {
        self.pairs.clone()
    }

    /// Order of the decoded path graph.
    #[wasm_bindgen(getter)]
    pub fn order(&self) -> u32 {
        self.order
    }

    #[wasm_bindgen(getter)]
    pub fn required_plain(&self) -> f64 {
        self.required_plain
    }

    #[wasm_bindgen(getter)]
    pub fn required_amplified(&self) -> f64 {
        self.required_amplified
    }
}

fn pairs_of(pg: &PathGraph, matching: &[(usize, usize)]) -> Vec<u32> {
    let mut out = Vec::new();
    for &(u, v) in matching {
        let ends = [pg.vertices()[u], pg.vertices()[v]];
        match ends {
            [PathVertex::Detector(a), PathVertex::Detector(b)] => out.extend([a as u32, b as u32]),
            [PathVertex::Detector(a), PathVertex::BoundaryCopy(_)]
            | [PathVertex::BoundaryCopy(_), PathVertex::Detector(a)] => out.extend([a as u32, BOUNDARY]),
            _ => {}
        }
    }
    out
}

impl Demo {
    pub fn build(d: usize, p: f64, b_low: u32, b_high: u32) -> Result<Demo> {
        let layout = SurfaceLayout::new(&NoiseModel::new(d, p)?)?;
        let low = table(&layout, b_low)?;
        let high = table(&layout, b_high)?;
        Ok(Demo { layout, low, high })
    }

    pub fn sample_active(&self, seed: u64) -> Vec<u32> {
        sample_shot(&self.layout.graph, derive_seed(seed, 0, 0))
            .active
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn decode_active(&self, active: &[u32], w_th: usize, k_mult: usize, seed: u64) -> Result<DecodeView> {
        let active: Vec<usize> = active.iter().map(|&d| d as usize).collect();
        let pg_low = self.low.path_graph(&active)?;
        let pg_high = self.high.path_graph(&active)?;
        let cfg = HeuristicConfig {
            w_th,
            trials: TrialCount::PerWMax(k_mult),
            base_seed: derive_seed(seed, 1, 0),
            ..HeuristicConfig::default()
        };
        let out = variable_precision_decode_paths(&pg_low, &pg_high, &cfg)?;
        let best = path_graph_mwpm(&pg_high)?.weight;
        let n = pg_high.order();
        let w_max = default_w_max(n);
        let low_best = path_graph_mwpm(&pg_low)?.weight;
        Ok(DecodeView {
            status: out.status.label().to_string(),
            w_star: out.w_star.map_or(-1.0, |w| w as f64),
            weight: out.weight.map_or(-1.0, |w| w as f64),
            best: best as f64,
            pairs: pairs_of(&pg_high, &out.matching),
            order: n as u32,
            required_plain: required_wth_from_weight(n, low_best, Scheme::Plain, w_max) as f64,
            required_amplified: required_wth_from_weight(n, best, Scheme::Amplified, w_max) as f64,
        })
    }

    /// `det B` of one plain perturbation at the low precision, as `0`/`1`
    /// characters from the constant term up.
    pub fn determinant_bits_of(&self, active: &[u32], w_th: usize, seed: u64) -> Result<String> {
        let active: Vec<usize> = active.iter().map(|&d| d as usize).collect();
        let pg = self.low.path_graph(&active)?;
        let pw = perturb(&pg, Scheme::Plain, default_w_max(pg.order()), derive_seed(seed, 1, 0))?;
        let det = build_matrix(&pg, &pw, w_th)?.determinant();
        Ok((0..w_th).map(|i| if det.coefficient(i) { '1' } else { '0' }).collect())
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(d: u32, p: f64, b_low: u32, b_high: u32) -> std::result::Result<Demo, JsError> {
        Demo::build(d as usize, p, b_low, b_high).map_err(js)
    }

    pub fn detectors_per_round(&self) -> u32 {
        self.layout.detectors_per_round as u32
    }

    /// `(row, col, round)` per detector, flattened.
    pub fn coordinates(&self) -> Vec<u32> {
        self.layout
            .coordinates
            .iter()
            .flat_map(|&(i, j, t)| [i as u32, j as u32, t as u32])
            .collect()
    }

    /// Active detectors of the shot drawn with `seed`.
    pub fn sample(&self, seed: u32) -> Vec<u32> {
        self.sample_active(seed as u64)
    }

    /// Variable-precision decode with `k_mult · W_max` trials.
    pub fn decode(&self, active: Vec<u32>, w_th: u32, k_mult: u32, seed: u32) -> std::result::Result<DecodeView, JsError> {
        self.decode_active(&active, w_th as usize, k_mult as usize, seed as u64)
            .map_err(js)
    }

    pub fn determinant_bits(&self, active: Vec<u32>, w_th: u32, seed: u32) -> std::result::Result<String, JsError> {
        self.determinant_bits_of(&active, w_th as usize, seed as u64).map_err(js)
    }
}

/// `2·(a·w + (n/2)·W_max) + 1`; `W_max = 0` picks `⌈0.8 n^0.8⌉`.
#[wasm_bindgen]
pub fn required_wth(order: u32, mwpm_weight: f64, w_max: u32, amplified: bool) -> f64 {
    let n = order as usize;
    let w_max = if w_max == 0 { default_w_max(n) } else { w_max as u64 };
    let scheme = if amplified { Scheme::Amplified } else { Scheme::Plain };
    required_wth_from_weight(n, mwpm_weight as u64, scheme, w_max) as f64
}
