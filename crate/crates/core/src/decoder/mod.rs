//! Determinant-based matching over the truncated ring.

pub mod berkowitz;
mod decode;
mod matrix;
mod perturb;

pub use decode::{
    decode, decode_with, is_perfect_matching, DecodeOutcome, DecodeProfile, DecodeStatus,
    MinorStrategy,
};
pub use matrix::{build_matrix, RingMatrix};
pub use perturb::{
    amplification_factor, default_w_max, perturb, perturb_with, PerturbedWeights, RngKind, Scheme,
};
