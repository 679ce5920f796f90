//! Samuelson–Berkowitz characteristic polynomial and the adjugate derived
//! from it. Division-free, so it runs over any commutative ring.

use crate::parallel;

/// The ring operations the determinant needs.
pub trait Ring: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// `self += a · b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.add_assign(&a.mul(b));
    }

    /// A fixed left operand in a form that is cheap to multiply by.
    type Factor: Send + Sync;

    /// `None` for zero.
    fn factor(&self) -> Option<Self::Factor>;

    /// `self += f · b`.
    fn mul_add_factor(&mut self, f: &Self::Factor, b: &Self);
}

/// Matrix entries prepared for repeated multiplication.
fn factors<R: Ring>(a: &[R]) -> Vec<Option<R::Factor>> {
    a.iter().map(Ring::factor).collect()
}

/// Left factor for [`crate::poly::TruncatedPoly`]: the entries of `B` are
/// monomials, which multiply by shifting.
pub enum PolyFactor {
    Monomial(usize),
    General(crate::poly::TruncatedPoly),
}

impl Ring for crate::poly::TruncatedPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.width())
    }
    fn one_like(&self) -> Self {
        Self::one(self.width())
    }
    fn is_zero(&self) -> bool {
        crate::poly::TruncatedPoly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        crate::poly::TruncatedPoly::add_assign(self, other)
    }
    fn neg(&self) -> Self {
        // characteristic 2
        self.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.mul_add_unchecked(a, b)
    }

    type Factor = PolyFactor;

    fn factor(&self) -> Option<PolyFactor> {
        if Ring::is_zero(self) {
            return None;
        }
        Some(match self.monomial_exponent() {
            Some(e) => PolyFactor::Monomial(e),
            None => PolyFactor::General(self.clone()),
        })
    }

    fn mul_add_factor(&mut self, f: &PolyFactor, b: &Self) {
        match f {
            PolyFactor::Monomial(e) => self.add_shifted_unchecked(b, *e),
            PolyFactor::General(p) => self.mul_add_unchecked(p, b),
        }
    }
}

/// Matrices at least this large spread row work over the worker pool.
const PARALLEL_ORDER: usize = 16;

fn dot<R: Ring>(row: &[Option<R::Factor>], col: &[R], zero: &R) -> R {
    let mut acc = zero.clone();
    for (a, b) in row.iter().zip(col) {
        if let Some(a) = a {
            if !b.is_zero() {
                acc.mul_add_factor(a, b);
            }
        }
    }
    acc
}

/// Coefficients `c_0 = 1, c_1, …, c_n` of `det(λI − A) = Σ c_i λ^(n−i)` for
/// the row-major `n × n` matrix `a`. `unit` fixes the ring context (its
/// value is ignored beyond `zero_like`/`one_like`).
pub fn characteristic_polynomial<R: Ring>(a: &[R], n: usize, unit: &R) -> Vec<R> {
    assert_eq!(a.len(), n * n);
    let zero = unit.zero_like();
    let one = unit.one_like();
    if n == 0 {
        return vec![one];
    }
    let at = |i: usize, j: usize| &a[i * n + j];
    let fa = factors(a);
    let mut coeffs = vec![one.clone(), at(0, 0).neg()];
    for k in 1..n {
        // A_{k+1} = [[M, c], [r, d]] with M the leading k×k block.
        let row = &fa[k * n..k * n + k];
        let mut v: Vec<R> = (0..k).map(|i| at(i, k).clone()).collect();
        // Toeplitz column t_0 .. t_{k+1}
        let mut t = Vec::with_capacity(k + 2);
        t.push(one.clone());
        t.push(at(k, k).neg());
        for j in 0..k {
            t.push(dot(row, &v, &zero).neg());
            if j + 1 < k {
                v = (0..k)
                    .map(|i| dot(&fa[i * n..i * n + k], &v, &zero))
                    .collect();
            }
        }
        let next: Vec<R> = (0..k + 2)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..=i.min(k) {
                    let ti = &t[i - j];
                    if !ti.is_zero() && !coeffs[j].is_zero() {
                        acc.mul_add_assign(ti, &coeffs[j]);
                    }
                }
                acc
            })
            .collect();
        coeffs = next;
    }
    coeffs
}

/// `det(A) = (−1)^n c_n`.
pub fn determinant_from_charpoly<R: Ring>(coeffs: &[R]) -> R {
    let n = coeffs.len() - 1;
    let c = coeffs[n].clone();
    if n % 2 == 1 {
        c.neg()
    } else {
        c
    }
}

/// Adjugate via `adj(A) = (−1)^(n−1) Σ_{k<n} c_k A^(n−1−k)`, evaluated by
/// Horner's rule. With `symmetric` set only the upper triangle of each
/// iterate is computed (valid when `A` is symmetric).
pub fn adjugate<R: Ring>(a: &[R], n: usize, coeffs: &[R], symmetric: bool) -> Vec<R> {
    assert_eq!(coeffs.len(), n + 1);
    if n == 0 {
        return Vec::new();
    }
    let zero = coeffs[0].zero_like();
    let fa = factors(a);
    let mut acc: Vec<R> = vec![zero.clone(); n * n];
    for i in 0..n {
        acc[i * n + i] = coeffs[0].clone();
    }
    for c in &coeffs[1..n] {
        let row_of = |i: usize| -> Vec<R> {
            let start = if symmetric { i } else { 0 };
            (start..n)
                .map(|j| {
                    let mut s = zero.clone();
                    for m in 0..n {
                        let Some(x) = &fa[i * n + m] else { continue };
                        let y = &acc[m * n + j];
                        if !y.is_zero() {
                            s.mul_add_factor(x, y);
                        }
                    }
                    s
                })
                .collect()
        };
        let rows: Vec<Vec<R>> = if n >= PARALLEL_ORDER {
            parallel::map_range(n, row_of)
        } else {
            (0..n).map(row_of).collect()
        };
        let mut next = vec![zero.clone(); n * n];
        for (i, row) in rows.into_iter().enumerate() {
            let start = if symmetric { i } else { 0 };
            for (off, val) in row.into_iter().enumerate() {
                let j = start + off;
                if symmetric {
                    next[j * n + i] = val.clone();
                }
                next[i * n + j] = val;
            }
        }
        for i in 0..n {
            next[i * n + i].add_assign(c);
        }
        acc = next;
    }
    if (n - 1) % 2 == 1 {
        for x in acc.iter_mut() {
            *x = x.neg();
        }
    }
    acc
}
