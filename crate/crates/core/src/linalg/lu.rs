use super::matrix::{DenseMatrix, Vector};
use super::LinalgConfig;
use crate::error::{AveError, Result};

/// Partial-pivoting LU factors `P A = L U`, stored combined.
///
/// The unit lower factor lives strictly below the diagonal of `lu`, the upper
/// factor on and above it. `perm[i]` is the source row of row `i` of `P A`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    lu_factor_with(a, &LinalgConfig::default())
}

pub fn lu_factor_with(a: &DenseMatrix, cfg: &LinalgConfig) -> Result<LuFactors> {
    let n = a.ensure_square()?;
    let floor = cfg.pivot_floor * a.max_abs();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot <= floor || pivot == 0.0 {
            return Err(AveError::SingularMatrix { step: k, pivot });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / d;
            lu[(i, k)] = factor;
            if factor != 0.0 {
                for j in k + 1..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

/// Solves `A x = rhs` with dimension checking.
pub fn lu_solve(f: &LuFactors, rhs: &Vector) -> Result<Vector> {
    if rhs.dim() != f.dim() {
        return Err(AveError::DimensionMismatch {
            expected: f.dim(),
            found: rhs.dim(),
        });
    }
    Vector::new(f.solve(rhs))
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`. Panics on dimension mismatch.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "lu solve dimension mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "lu solve dimension mismatch");
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = b, Lᵀ w = z, x = Pᵀ w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[(k, i)] * z[k]).sum();
            z[i] = (z[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.lu[(k, i)] * z[k]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(b.rows(), self.dim(), "lu solve dimension mismatch");
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_column(j, &self.solve(&b.column(j)));
        }
        out
    }

    pub fn inverse(&self) -> DenseMatrix {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Diagonal of the upper factor.
    pub fn pivots(&self) -> Vec<f64> {
        self.lu.diagonal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vec_of(v: &[f64]) -> Vector {
        Vector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_has_unit_pivots() {
        let f = lu_factor(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(f.pivots(), vec![1.0; 3]);
        assert_eq!(f.permutation(), &[0, 1, 2]);
        let x = lu_solve(&lu_factor(&DenseMatrix::identity(4)).unwrap(), &vec_of(&[1.0, 2.0, 3.0, 4.0]))
            .unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn permutation_matrix_needs_pivoting() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let f = lu_factor(&a).unwrap();
        assert_eq!(f.solve(&[2.0, 3.0]), vec![3.0, 2.0]);
    }

    #[test]
    fn diagonal_solve() {
        let f = lu_factor(&DenseMatrix::from_diagonal(&[2.0, 4.0]).unwrap()).unwrap();
        assert_eq!(f.solve(&[2.0, 4.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(lu_factor(&a), Err(AveError::SingularMatrix { step: 1, .. })));
        assert!(lu_factor(&DenseMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(
            lu_factor(&DenseMatrix::zeros(2, 3)),
            Err(AveError::NotSquare { .. })
        ));
    }

    #[test]
    fn solve_checks_dimension() {
        let f = lu_factor(&DenseMatrix::identity(3)).unwrap();
        assert!(matches!(
            lu_solve(&f, &vec_of(&[1.0, 2.0])),
            Err(AveError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    fn shifted_random(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.gen_range(-1.0..=1.0);
            }
            a[(i, i)] += n as f64;
        }
        a
    }

    #[test]
    fn unit_column_residuals() {
        let a = shifted_random(8, 11);
        let f = lu_factor(&a).unwrap();
        for j in 0..8 {
            let mut e = vec![0.0; 8];
            e[j] = 1.0;
            let x = f.solve(&e);
            let r = a.matvec(&x);
            let err = r.iter().zip(&e).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-10, "column {j}: residual {err}");
        }
    }

    #[test]
    fn inverse_reconstructs_identity() {
        let a = shifted_random(10, 3);
        let f = lu_factor(&a).unwrap();
        let prod = f.inverse().matmul(&a);
        let err = prod.sub(&DenseMatrix::identity(10)).max_abs();
        assert!(err <= 1e-10 * 10.0);
    }

    #[test]
    fn transpose_solve_agrees_with_explicit_transpose() {
        let a = shifted_random(6, 5);
        let f = lu_factor(&a).unwrap();
        let ft = lu_factor(&a.transpose()).unwrap();
        let b = [1.0, -2.0, 0.5, 3.0, 0.0, 1.5];
        let x1 = f.solve_transpose(&b);
        let x2 = ft.solve(&b);
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
