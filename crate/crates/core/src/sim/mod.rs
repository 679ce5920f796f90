//! Noise sampling on rotated surface codes and the Monte Carlo sweeps.

mod check;
mod sample;
mod surface;
mod sweep;

pub use check::{oracle_case, oracle_check, random_even_graph, OracleCase, OracleReport};
pub use sample::{derive_seed, sample_shot, Shot};
pub use surface::{build_surface_detector_graph, NoiseModel, SurfaceLayout};
pub use sweep::{
    precision_sweep, required_wth_survey, threshold_sweep, threshold_sweep_on, LogicalReference,
    PrecisionSweepConfig, RequiredWthRow, SweepPoint, SweepResult, ThresholdSweepConfig, METHODS,
    PATH_GRAPH_CAP,
};
