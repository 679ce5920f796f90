use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::graph::DetectorGraph;

/// One sampled shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shot {
    /// Detectors with odd parity, ascending.
    pub active: Vec<usize>,
    /// Edges that flipped, ascending.
    pub faults: Vec<usize>,
    /// Logical observables flipped by the faults.
    pub observables: u64,
}

/// Independent seed for item `index` of stream `stream` (SplitMix64
/// finalizer over the combined inputs).
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Flips every edge independently with its probability.
pub fn sample_shot(g: &DetectorGraph, seed: u64) -> Shot {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let faults: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| rng.gen::<f64>() < e.probability)
        .map(|(k, _)| k)
        .collect();
    let observables = faults.iter().fold(0, |m, &k| m ^ g.edges()[k].observables);
    Shot {
        active: g.syndrome_of(&faults),
        faults,
        observables,
    }
}
