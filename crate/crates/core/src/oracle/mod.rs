//! Independent ground truth for the determinant decoders.

mod appendix_a;
mod exhaustive;
mod subset;

pub use appendix_a::{appendix_a_decode, appendix_a_determinant};
pub use exhaustive::{exhaustive_mwpm, exhaustive_mwpm_with, ExhaustiveMwpm, EXHAUSTIVE_LIMIT};
pub use subset::{boundary_mwpm, path_graph_mwpm, BoundaryMatching, Pairing, SUBSET_LIMIT};
