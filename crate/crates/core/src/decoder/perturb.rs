use rand::distributions::{Distribution, Uniform};
use rand::{RngCore, SeedableRng};
use rand_mt::Mt;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::PathGraph;

/// How perturbations are folded into the edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `C̃·w(e) + W(e)` with `C̃ = (n/2)(W_max − 1) + 1`: an isolated
    /// minimum is also minimum under the unperturbed weights.
    Amplified,
    /// `w(e) + W(e)`: far fewer bits, but a minimum is only a candidate.
    Plain,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplified" => Ok(Scheme::Amplified),
            "plain" => Ok(Scheme::Plain),
            _ => Err(Error::Config(format!("unknown scheme `{s}`"))),
        }
    }
}

/// Pseudo-random generator used to draw perturbations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum RngKind {
    /// xoshiro256++ seeded through SplitMix64 from the 64-bit seed.
    #[default]
    Xoshiro,
    /// 32-bit Mersenne Twister (MT19937) seeded with the low 32 bits.
    MersenneTwister,
}

/// Default perturbation range `⌈0.8 n^0.8⌉` for a path graph of order `n`.
pub fn default_w_max(order: usize) -> u64 {
    if order == 0 {
        return 1;
    }
    let x = 0.8 * (order as f64).powf(0.8);
    (x.ceil() as u64).max(1)
}

/// `C̃ = (n/2)(W_max − 1) + 1`.
pub fn amplification_factor(order: usize, w_max: u64) -> u64 {
    (order as u64 / 2) * (w_max - 1) + 1
}

/// One draw of per-edge perturbations and the resulting effective weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedWeights {
    pub scheme: Scheme,
    pub w_max: u64,
    pub seed: u64,
    pub rng: RngKind,
    /// 1 for [`Scheme::Plain`], `C̃` for [`Scheme::Amplified`].
    pub amplification: u64,
    /// `W(e)` per path-graph edge, in [1, W_max].
    pub perturbation: Vec<u64>,
    /// Weight used as the exponent of `X` in the matrix, per edge.
    pub effective: Vec<u64>,
}

impl PerturbedWeights {
    /// Effective weights from explicit perturbations (each in [1, W_max]).
    pub fn from_parts(
        pg: &PathGraph,
        scheme: Scheme,
        w_max: u64,
        perturbation: Vec<u64>,
    ) -> Result<Self> {
        if w_max == 0 {
            return Err(Error::Config("W_max must be at least 1".into()));
        }
        if perturbation.len() != pg.edges().len() {
            return Err(Error::Config("one perturbation per edge is required".into()));
        }
        if let Some(bad) = perturbation.iter().find(|&&w| w == 0 || w > w_max) {
            return Err(Error::Config(format!("perturbation {bad} outside [1, {w_max}]")));
        }
        let amplification = match scheme {
            Scheme::Amplified => amplification_factor(pg.order(), w_max),
            Scheme::Plain => 1,
        };
        let effective = pg
            .edges()
            .iter()
            .zip(&perturbation)
            .map(|(e, &p)| amplification * e.weight + p)
            .collect();
        Ok(Self {
            scheme,
            w_max,
            seed: 0,
            rng: RngKind::default(),
            amplification,
            perturbation,
            effective,
        })
    }

    pub fn effective_weight(&self, edge: usize) -> u64 {
        self.effective[edge]
    }
}

/// Draws i.i.d. uniform `W(e) ∈ {1, …, W_max}` for every edge, in edge order.
pub fn perturb(pg: &PathGraph, scheme: Scheme, w_max: u64, seed: u64) -> Result<PerturbedWeights> {
    perturb_with(pg, scheme, w_max, seed, RngKind::default())
}

pub fn perturb_with(
    pg: &PathGraph,
    scheme: Scheme,
    w_max: u64,
    seed: u64,
    rng: RngKind,
) -> Result<PerturbedWeights> {
    if w_max == 0 {
        return Err(Error::Config("W_max must be at least 1".into()));
    }
    let dist = Uniform::new_inclusive(1, w_max);
    let m = pg.edges().len();
    let draws: Vec<u64> = match rng {
        RngKind::Xoshiro => sample(&mut Xoshiro256PlusPlus::seed_from_u64(seed), dist, m),
        RngKind::MersenneTwister => sample(&mut Mt::new(seed as u32), dist, m),
    };
    let mut pw = PerturbedWeights::from_parts(pg, scheme, w_max, draws)?;
    pw.seed = seed;
    pw.rng = rng;
    Ok(pw)
}

fn sample(rng: &mut impl RngCore, dist: Uniform<u64>, count: usize) -> Vec<u64> {
    (0..count).map(|_| dist.sample(rng)).collect()
}
