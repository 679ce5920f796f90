//! Detector graphs, weight discretization and path-graph construction.

mod detector;
mod dijkstra;
mod format;
mod path;
mod weights;

pub use detector::{DetectorEdge, DetectorGraph, Vertex, VertexKind};
pub use dijkstra::{shortest_paths, PathLength, ShortestPaths};
pub use format::{parse_syndromes, write_syndromes};
pub use path::{build_path_graph, DistanceTable, PathEdge, PathGraph, PathVertex};
pub use weights::{discretize_probability, scale_for_precision, WeightFunction};
