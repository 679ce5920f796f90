//! Exact MWPM for path graphs with the detector + boundary-copy layout.
//!
//! Every such matching pairs some active detectors with each other and sends
//! the rest to their boundary copies (the copies pair among themselves at
//! weight 0), so a DP over subsets of detectors finds the optimum in
//! `O(2^k k)` time.

use crate::error::{Error, Result};
use crate::graph::{PathGraph, PathLength};

/// Largest number of active detectors handled.
pub const SUBSET_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    Pair(usize, usize),
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatching<L> {
    pub weight: L,
    /// In increasing order of the lowest detector involved.
    pub pairings: Vec<Pairing>,
}

impl<L> BoundaryMatching<L> {
    /// The same matching as edges of a path graph with `k` active detectors.
    /// Leftover boundary copies are paired in ascending order.
    pub fn path_edges(&self, k: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(k);
        let mut spare = Vec::new();
        for p in &self.pairings {
            match *p {
                Pairing::Pair(i, j) => {
                    edges.push((i.min(j), i.max(j)));
                    spare.extend([k + i, k + j]);
                }
                Pairing::Boundary(i) => edges.push((i, k + i)),
            }
        }
        spare.sort_unstable();
        edges.extend(spare.chunks(2).map(|c| (c[0], c[1])));
        edges.sort_unstable();
        edges
    }
}

/// Minimum over pairings of `k` detectors where `pair(i, j)` (`i < j`) and
/// `boundary(i)` give the available costs. Ties prefer the boundary, then the
/// lowest partner.
pub fn boundary_mwpm<L: PathLength>(
    k: usize,
    pair: impl Fn(usize, usize) -> Option<L>,
    boundary: impl Fn(usize) -> Option<L>,
) -> Result<BoundaryMatching<L>> {
    if k > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            order: 2 * k,
            limit: 2 * SUBSET_LIMIT,
        });
    }
    let pairs: Vec<Option<L>> = (0..k * k)
        .map(|x| {
            let (i, j) = (x / k, x % k);
            if i < j {
                pair(i, j)
            } else {
                None
            }
        })
        .collect();
    let bd: Vec<Option<L>> = (0..k).map(&boundary).collect();
    let full = (1usize << k) - 1;
    let mut best: Vec<Option<L>> = vec![None; full + 1];
    // partner of the lowest member; `k` means the boundary
    let mut choice: Vec<u8> = vec![0; full + 1];
    best[0] = Some(L::ZERO);
    for s in 1..=full {
        let i = s.trailing_zeros() as usize;
        let rest = s & !(1 << i);
        let mut here: Option<L> = None;
        let mut pick = 0u8;
        if let (Some(b), Some(r)) = (bd[i], best[rest]) {
            here = Some(b + r);
            pick = k as u8;
        }
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            if let (Some(w), Some(r)) = (pairs[i * k + j], best[rest & !(1 << j)]) {
                let c = w + r;
                if here.map_or(true, |h| c < h) {
                    here = Some(c);
                    pick = j as u8;
                }
            }
        }
        best[s] = here;
        choice[s] = pick;
    }
    let weight = best[full].ok_or(Error::NoPerfectMatching)?;
    let mut pairings = Vec::new();
    let mut s = full;
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        let j = choice[s] as usize;
        if j == k {
            pairings.push(Pairing::Boundary(i));
            s &= !(1 << i);
        } else {
            pairings.push(Pairing::Pair(i, j));
            s &= !((1 << i) | (1 << j));
        }
    }
    Ok(BoundaryMatching { weight, pairings })
}

/// [`boundary_mwpm`] on a path graph built from active detectors.
pub fn path_graph_mwpm(pg: &PathGraph) -> Result<BoundaryMatching<u64>> {
    let k = pg
        .active_detectors()
        .ok_or_else(|| Error::Config("path graph has no detector layout".into()))?;
    boundary_mwpm(k, |i, j| pg.weight(i, j), |i| pg.weight(i, k + i))
}
