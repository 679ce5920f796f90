//! Exact integer determinant decoder: the signed Tutte matrix with
//! `x_ij = 2^{w̃(ij)}`, evaluated with arbitrary-precision integers and the
//! same Berkowitz recursion as the ring decoder.

use num_bigint::{BigInt, Sign};

use crate::decoder::berkowitz::{adjugate, characteristic_polynomial, determinant_from_charpoly, Ring};
use crate::decoder::{is_perfect_matching, DecodeOutcome, DecodeStatus, PerturbedWeights, Scheme};
use crate::error::{Error, Result};
use crate::graph::PathGraph;

/// `Some((negative, e))` when `x = ±2^e`.
fn signed_power_of_two(x: &BigInt) -> Option<(bool, u64)> {
    let tz = x.magnitude().trailing_zeros()?;
    (x.magnitude().bits() == tz + 1).then_some((x.sign() == Sign::Minus, tz))
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::from(0)
    }
    fn one_like(&self) -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        self.sign() == Sign::NoSign
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        // matrix entries are ±2^w̃, so most products are shifts
        let shifted = |x: &BigInt, (negative, e): (bool, u64)| {
            let r = x << e;
            if negative {
                -r
            } else {
                r
            }
        };
        if let Some(p) = signed_power_of_two(other) {
            shifted(self, p)
        } else if let Some(p) = signed_power_of_two(self) {
            shifted(other, p)
        } else {
            self * other
        }
    }

    type Factor = BigInt;

    fn factor(&self) -> Option<BigInt> {
        (!Ring::is_zero(self)).then(|| self.clone())
    }

    fn mul_add_factor(&mut self, f: &BigInt, b: &BigInt) {
        *self += Ring::mul(f, b);
    }
}

fn signed_matrix(pg: &PathGraph, pw: &PerturbedWeights) -> Vec<BigInt> {
    let n = pg.order();
    let mut a = vec![BigInt::from(0); n * n];
    for (e, &w) in pg.edges().iter().zip(&pw.effective) {
        let x = BigInt::from(1) << w;
        a[e.v * n + e.u] = -x.clone();
        a[e.u * n + e.v] = x;
    }
    a
}

fn check(pg: &PathGraph, pw: &PerturbedWeights) -> Result<()> {
    if pw.scheme != Scheme::Amplified {
        return Err(Error::Config("the integer decoder is defined for amplified weights".into()));
    }
    if pw.effective.len() != pg.edges().len() {
        return Err(Error::Config("perturbed weights do not belong to this graph".into()));
    }
    if pg.order() % 2 == 1 {
        return Err(Error::OddOrder(pg.order()));
    }
    Ok(())
}

/// Exact integer `det(B)` of the signed matrix.
pub fn appendix_a_determinant(pg: &PathGraph, pw: &PerturbedWeights) -> Result<BigInt> {
    check(pg, pw)?;
    let a = signed_matrix(pg, pw);
    let coeffs = characteristic_polynomial(&a, pg.order(), &BigInt::from(1));
    Ok(determinant_from_charpoly(&coeffs))
}

/// `w* = ⌊v₂(det B) / 2⌋`; edge `{i, j}` is selected when
/// `M_ij · 2^{w̃(ij)} / 2^{2w*}` is an odd integer.
///
/// Returns [`Error::NoPerfectMatching`] when the exact determinant is zero.
pub fn appendix_a_decode(pg: &PathGraph, pw: &PerturbedWeights) -> Result<DecodeOutcome> {
    check(pg, pw)?;
    let n = pg.order();
    if n == 0 {
        return Ok(DecodeOutcome {
            status: DecodeStatus::Matching,
            matching: Vec::new(),
            w_star: Some(0),
            weight: Some(0),
        });
    }
    let a = signed_matrix(pg, pw);
    let coeffs = characteristic_polynomial(&a, n, &BigInt::from(1));
    let det = determinant_from_charpoly(&coeffs);
    let v = det.magnitude().trailing_zeros().ok_or(Error::NoPerfectMatching)?;
    let w_star = v / 2;
    let adj = adjugate(&a, n, &coeffs, false);
    let mut selected = Vec::new();
    for (k, (e, &w)) in pg.edges().iter().zip(&pw.effective).enumerate() {
        // M_ij = (−1)^{i+j} adj_ji; the sign does not affect 2-adic valuation
        let minor = &adj[e.v * n + e.u];
        if let Some(tz) = minor.magnitude().trailing_zeros() {
            if tz + w == 2 * w_star {
                selected.push(k);
            }
        }
    }
    let matching: Vec<(usize, usize)> = selected.iter().map(|&k| (pg.edges()[k].u, pg.edges()[k].v)).collect();
    let effective: u64 = selected.iter().map(|&k| pw.effective[k]).sum();
    let status = if is_perfect_matching(n, &matching) && effective == w_star {
        DecodeStatus::Matching
    } else {
        DecodeStatus::NotIsolated
    };
    Ok(DecodeOutcome {
        status,
        matching,
        w_star: Some(w_star),
        weight: Some(selected.iter().map(|&k| pg.edges()[k].weight).sum()),
    })
}
