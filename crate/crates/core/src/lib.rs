//! Minimum-weight perfect matching for surface-code decoding through
//! determinants over the truncated polynomial ring F₂[X]/(X^w_th).
//!
//! The decoder never overflows silently: if the minimum matching weight does
//! not fit the chosen bit length, the determinant vanishes and the outcome is
//! an explicit overflow failure.

pub mod decoder;
pub mod error;
pub mod graph;
pub mod heuristic;
pub mod oracle;
pub mod parallel;
pub mod poly;
pub mod sim;

pub use decoder::{decode, DecodeOutcome, DecodeStatus, PerturbedWeights, Scheme};
pub use error::{Error, Result};
pub use graph::{DetectorGraph, PathGraph, WeightFunction};
pub use poly::TruncatedPoly;
