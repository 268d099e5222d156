//! The `A = N − M` splitting used by all four iterations.
//!
//! Sign convention: `D`, `−L` and `−U` are the diagonal, strictly lower and
//! strictly upper parts of `A`, so `L` and `U` hold the *negated* strict
//! triangles and `A = D − L − U`. From these,
//! `N = D − U + Uᵀ` and `M = L + Uᵀ`, which gives `N − M = A`.

use crate::error::{AveError, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    /// Diagonal part of `A`.
    pub d: DenseMatrix,
    /// Negated strictly lower part of `A`.
    pub l: DenseMatrix,
    /// Negated strictly upper part of `A`.
    pub u: DenseMatrix,
    /// `D − U + Uᵀ`.
    pub n: DenseMatrix,
    /// `L + Uᵀ`.
    pub m: DenseMatrix,
}

pub fn split(a: &DenseMatrix) -> Result<Splitting> {
    let size = a.ensure_square()?;
    let mut d = DenseMatrix::zeros(size, size);
    let mut l = DenseMatrix::zeros(size, size);
    let mut u = DenseMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            let v = a[(i, j)];
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => d[(i, j)] = v,
                std::cmp::Ordering::Greater => l[(i, j)] = -v,
                std::cmp::Ordering::Less => u[(i, j)] = -v,
            }
        }
    }
    let ut = u.transpose();
    let n = d.sub(&u).add(&ut);
    let m = l.add(&ut);
    Ok(Splitting { d, l, u, n, m })
}

/// Reciprocals of a diagonal matrix; fails on entries at or below
/// `1e-14 × max|D|`.
pub fn inv_diag(d: &DenseMatrix) -> Result<DenseMatrix> {
    DenseMatrix::from_diagonal(&inv_diag_entries(d)?)
}

pub(crate) fn inv_diag_entries(d: &DenseMatrix) -> Result<Vec<f64>> {
    d.ensure_square()?;
    let diag = d.diagonal();
    let floor = crate::linalg::PIVOT_FLOOR * diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    diag.iter()
        .enumerate()
        .map(|(index, &v)| {
            if v == 0.0 || v.abs() <= floor {
                Err(AveError::ZeroDiagonal { index })
            } else {
                Ok(1.0 / v)
            }
        })
        .collect()
}

impl Splitting {
    pub fn dim(&self) -> usize {
        self.d.rows()
    }

    /// `D⁻¹`, as a vector of diagonal entries.
    pub fn inv_diag_entries(&self) -> Result<Vec<f64>> {
        inv_diag_entries(&self.d)
    }

    /// `D⁻¹ M`.
    pub fn d_inv_m(&self) -> Result<DenseMatrix> {
        Ok(self.m.scale_rows(&self.inv_diag_entries()?))
    }

    /// Reassembles `D − L − U`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.d.sub(&self.l).sub(&self.u)
    }
}
