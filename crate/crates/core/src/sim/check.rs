use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::derive_seed;
use crate::decoder::{decode, default_w_max, perturb, DecodeStatus, Scheme};
use crate::error::{Error, Result};
use crate::graph::PathGraph;
use crate::heuristic::required_wth_bound;
use crate::oracle::{appendix_a_decode, exhaustive_mwpm, exhaustive_mwpm_with, EXHAUSTIVE_LIMIT};
use crate::parallel;

const GRAPH_STREAM: u64 = 2;
const PERTURB_STREAM: u64 = 3;

/// Random graph on `order` (even) vertices: a hidden perfect matching plus
/// every other pair with probability `density`, weights uniform in
/// `1..=max_weight`.
pub fn random_even_graph(rng: &mut impl Rng, order: usize, max_weight: u64, density: f64) -> Result<PathGraph> {
    if order % 2 == 1 {
        return Err(Error::OddOrder(order));
    }
    if max_weight == 0 {
        return Err(Error::Config("max_weight must be at least 1".into()));
    }
    let mut perm: Vec<usize> = (0..order).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for pair in perm.chunks(2) {
        edges.push((pair[0], pair[1], rng.gen_range(1..=max_weight)));
    }
    for u in 0..order {
        for v in u + 1..order {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    // from_edges keeps the lightest of parallel edges
    PathGraph::from_edges(order, &edges)
}

/// One amplified random instance, decoded every way available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCase {
    pub order: usize,
    pub w_max: u64,
    /// `required_wth_bound + 2`.
    pub w_th: usize,
    /// Minimum perturbed weight (exhaustive).
    pub w_star: u64,
    /// The perturbed minimum is unique.
    pub isolated: bool,
    /// Decoder output equals the unique perturbed minimum, its unperturbed
    /// weight equals the exhaustive MWPM weight and `w*` matches.
    pub decode_agrees: bool,
    /// Integer-arithmetic decode returns the same `(w*, M)` as the decoder.
    pub appendix_agrees: bool,
    /// Decoding at widths `2w*` and `2w* − 1` reports overflow.
    pub overflow_detected: bool,
}

pub fn oracle_case(order: usize, max_weight: u64, density: f64, seed: u64, index: u64) -> Result<OracleCase> {
    if order > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            order,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(derive_seed(seed, GRAPH_STREAM, index));
    let pg = random_even_graph(&mut rng, order, max_weight, density)?;
    let w_max = default_w_max(order);
    let pw = perturb(&pg, Scheme::Amplified, w_max, derive_seed(seed, PERTURB_STREAM, index))?;
    let w_th = required_wth_bound(&pg, Scheme::Amplified, w_max)? as usize + 2;
    let plain = exhaustive_mwpm(&pg)?;
    let perturbed = exhaustive_mwpm_with(&pg, |k| pw.effective[k])?;
    let isolated = perturbed.is_unique();
    let out = decode(&pg, &pw, w_th)?;
    let decode_agrees = out.status == DecodeStatus::Matching
        && out.w_star == Some(perturbed.weight)
        && out.weight == Some(plain.weight)
        && perturbed.matchings.first() == Some(&out.matching);
    let reference = appendix_a_decode(&pg, &pw)?;
    let appendix_agrees = reference.status == out.status
        && reference.w_star == out.w_star
        && reference.matching == out.matching;
    let at = |w: u64| -> Result<bool> {
        Ok(w == 0 || decode(&pg, &pw, w as usize)?.status == DecodeStatus::OverflowFailure)
    };
    let overflow_detected = at(2 * perturbed.weight)? && at(2 * perturbed.weight - 1)?;
    Ok(OracleCase {
        order,
        w_max,
        w_th,
        w_star: perturbed.weight,
        isolated,
        decode_agrees,
        appendix_agrees,
        overflow_detected,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
}

impl OracleReport {
    pub const HEADER: &'static str = "n,cases,isolated,decode_agrees,appendix_agrees,overflow_detected";

    pub fn isolated(&self) -> impl Iterator<Item = &OracleCase> {
        self.cases.iter().filter(|c| c.isolated)
    }

    /// Isolated cases where either decoder disagrees, plus any case where
    /// overflow went unreported.
    pub fn failures(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| !c.overflow_detected || (c.isolated && !(c.decode_agrees && c.appendix_agrees)))
            .count()
    }

    /// One CSV row per graph order; agreement columns count isolated cases.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", Self::HEADER).unwrap();
        let mut orders: Vec<usize> = self.cases.iter().map(|c| c.order).collect();
        orders.sort_unstable();
        orders.dedup();
        for n in orders {
            let of: Vec<&OracleCase> = self.cases.iter().filter(|c| c.order == n).collect();
            let iso: Vec<&&OracleCase> = of.iter().filter(|c| c.isolated).collect();
            writeln!(
                s,
                "{n},{},{},{},{},{}",
                of.len(),
                iso.len(),
                iso.iter().filter(|c| c.decode_agrees).count(),
                iso.iter().filter(|c| c.appendix_agrees).count(),
                of.iter().filter(|c| c.overflow_detected).count(),
            )
            .unwrap();
        }
        s
    }
}

/// `cases` instances with orders cycling through `4, 6, …, n_max`, random
/// weights up to `max_weight` and edge density one half.
pub fn oracle_check(n_max: usize, cases: u64, max_weight: u64, seed: u64) -> Result<OracleReport> {
    if n_max < 4 || n_max % 2 == 1 {
        return Err(Error::Config(format!("n_max must be even and at least 4, got {n_max}")));
    }
    let orders: Vec<usize> = (4..=n_max).step_by(2).collect();
    let cases = parallel::map_range(cases as usize, |i| {
        oracle_case(orders[i % orders.len()], max_weight, 0.5, seed, i as u64)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { cases })
}
