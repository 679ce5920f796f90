use crate::error::{Error, Result};
use crate::graph::PathGraph;

/// Largest order enumerated (15!! = 2,027,025 matchings of K16).
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveMwpm {
    pub weight: u64,
    /// Every minimum-weight perfect matching, each as sorted `(u, v)` pairs
    /// with `u < v`, in enumeration order.
    pub matchings: Vec<Vec<(usize, usize)>>,
    /// Number of perfect matchings enumerated.
    pub total: u64,
}

impl ExhaustiveMwpm {
    pub fn is_unique(&self) -> bool {
        self.matchings.len() == 1
    }
}

/// Enumerates all perfect matchings by pairing the lowest unmatched vertex.
pub fn exhaustive_mwpm(pg: &PathGraph) -> Result<ExhaustiveMwpm> {
    exhaustive_mwpm_with(pg, |k| pg.edges()[k].weight)
}

/// As [`exhaustive_mwpm`] but under `weight(edge index)`, e.g. perturbed
/// effective weights.
pub fn exhaustive_mwpm_with(pg: &PathGraph, weight: impl Fn(usize) -> u64) -> Result<ExhaustiveMwpm> {
    let n = pg.order();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            order: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut search = Search {
        pg,
        weight: &weight,
        matched: vec![false; n],
        stack: Vec::with_capacity(n / 2),
        best: None,
        matchings: Vec::new(),
        total: 0,
    };
    search.run(0);
    let weight = search.best.ok_or(Error::NoPerfectMatching)?;
    Ok(ExhaustiveMwpm {
        weight,
        matchings: search.matchings,
        total: search.total,
    })
}

struct Search<'a, F> {
    pg: &'a PathGraph,
    weight: &'a F,
    matched: Vec<bool>,
    stack: Vec<(usize, usize)>,
    best: Option<u64>,
    matchings: Vec<Vec<(usize, usize)>>,
    total: u64,
}

impl<F: Fn(usize) -> u64> Search<'_, F> {
    fn run(&mut self, acc: u64) {
        let Some(u) = self.matched.iter().position(|&m| !m) else {
            self.total += 1;
            match self.best {
                Some(b) if acc > b => {}
                Some(b) if acc == b => self.matchings.push(self.sorted()),
                _ => {
                    self.best = Some(acc);
                    self.matchings.clear();
                    self.matchings.push(self.sorted());
                }
            }
            return;
        };
        self.matched[u] = true;
        for v in (u + 1)..self.pg.order() {
            if self.matched[v] {
                continue;
            }
            if let Some(k) = self.pg.edge_index(u, v) {
                self.matched[v] = true;
                self.stack.push((u, v));
                self.run(acc + (self.weight)(k));
                self.stack.pop();
                self.matched[v] = false;
            }
        }
        self.matched[u] = false;
    }

    fn sorted(&self) -> Vec<(usize, usize)> {
        let mut m = self.stack.clone();
        m.sort_unstable();
        m
    }
}
