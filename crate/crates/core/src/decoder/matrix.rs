use super::berkowitz::{adjugate, characteristic_polynomial, determinant_from_charpoly};
use super::PerturbedWeights;
use crate::error::{Error, Result};
use crate::graph::PathGraph;
use crate::poly::TruncatedPoly;

/// Square matrix over F₂[X]/(X^width), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    order: usize,
    width: usize,
    entries: Vec<TruncatedPoly>,
}

impl RingMatrix {
    pub fn zeros(order: usize, width: usize) -> Self {
        Self {
            order,
            width,
            entries: vec![TruncatedPoly::zero(width); order * order],
        }
    }

    /// Builds a matrix from rows of entries; all entries must share `width`.
    pub fn from_rows(rows: Vec<Vec<TruncatedPoly>>, width: usize) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(Error::Config("matrix rows must be square".into()));
            }
            for p in row {
                if p.width() != width {
                    return Err(Error::WidthMismatch {
                        left: width,
                        right: p.width(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(Self {
            order,
            width,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedPoly {
        &self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TruncatedPoly) {
        assert_eq!(value.width(), self.width, "truncation widths differ");
        self.entries[i * self.order + j] = value;
    }

    pub fn entries(&self) -> &[TruncatedPoly] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Matrix with row `row` and column `col` removed.
    pub fn submatrix(&self, row: usize, col: usize) -> Result<Self> {
        self.check_index(row, col)?;
        let n = self.order;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != row) {
            for j in (0..n).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        Ok(Self {
            order: n - 1,
            width: self.width,
            entries,
        })
    }

    /// `P A Pᵀ` for the permutation `i ↦ perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order);
        let mut out = Self::zeros(self.order, self.width);
        for i in 0..self.order {
            for j in 0..self.order {
                out.entries[perm[i] * self.order + perm[j]] = self.get(i, j).clone();
            }
        }
        out
    }

    fn check_index(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.order || col >= self.order {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                order: self.order,
            });
        }
        Ok(())
    }

    fn unit(&self) -> TruncatedPoly {
        TruncatedPoly::one(self.width)
    }

    pub fn characteristic_polynomial(&self) -> Vec<TruncatedPoly> {
        characteristic_polynomial(&self.entries, self.order, &self.unit())
    }

    /// Division-free determinant (Samuelson–Berkowitz).
    pub fn determinant(&self) -> TruncatedPoly {
        determinant_from_charpoly(&self.characteristic_polynomial())
    }

    /// `det` of the matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Result<TruncatedPoly> {
        Ok(self.submatrix(i, j)?.determinant())
    }

    /// All minors at once: entry `(i, j)` of the result is the minor with row
    /// `i` and column `j` removed. Signs vanish in characteristic 2, so this
    /// is the transposed adjugate.
    pub fn minors_from_charpoly(&self, coeffs: &[TruncatedPoly]) -> RingMatrix {
        let adj = adjugate(&self.entries, self.order, coeffs, self.is_symmetric());
        let mut out = Self {
            order: self.order,
            width: self.width,
            entries: adj,
        };
        // adj(A)_{ji} is the (i, j) cofactor
        for i in 0..self.order {
            for j in 0..i {
                out.entries.swap(i * self.order + j, j * self.order + i);
            }
        }
        out
    }
}

/// The signless matrix `B`: `B_ij = B_ji = X^{effective({i,j})}` on edges,
/// zero elsewhere. Exponents at or above `w_th` give zero entries.
pub fn build_matrix(pg: &PathGraph, pw: &PerturbedWeights, w_th: usize) -> Result<RingMatrix> {
    if w_th == 0 {
        return Err(Error::ZeroWidth);
    }
    if pw.effective.len() != pg.edges().len() {
        return Err(Error::Config("perturbed weights do not belong to this graph".into()));
    }
    let mut m = RingMatrix::zeros(pg.order(), w_th);
    for (e, &w) in pg.edges().iter().zip(&pw.effective) {
        let x = TruncatedPoly::monomial(w as usize, w_th);
        m.set(e.u, e.v, x.clone());
        m.set(e.v, e.u, x);
    }
    Ok(m)
}
