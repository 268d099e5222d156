use super::eigen::symmetric_eigenvalues;
use super::lu::LuFactors;
use super::matrix::{dot, norm2, DenseMatrix};
use super::LinalgConfig;
use crate::error::{AveError, Result};

/// Largest singular value, `sqrt(λ_max(MᵀM))`.
///
/// The Gram matrix (the smaller of `MᵀM` and `MMᵀ`) goes through the
/// symmetric tridiagonal QL solver, which resolves clustered top singular
/// values that stall plain power iteration.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    if m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let gram = if m.rows() >= m.cols() {
        m.transpose().matmul(m)
    } else {
        m.matmul(&m.transpose())
    };
    let top = symmetric_eigenvalues(&gram)?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok(top.max(0.0).sqrt())
}

/// `‖A⁻¹‖₂` from an LU factorization of `A`.
pub fn inv_norm(f: &LuFactors) -> Result<f64> {
    spectral_norm(&f.inverse())
}

/// Power-iteration estimate of `‖M‖₂` on `MᵀM`.
///
/// Starts from the normalized all-ones vector; if that is annihilated, retries
/// from the alternating `±1` vector, then from the unit vector of the
/// largest column. Stops when the Rayleigh quotient changes by at most
/// `cfg.power_tol` relative.
pub fn power_norm_estimate(m: &DenseMatrix, cfg: &LinalgConfig) -> Result<f64> {
    let n = m.cols();
    let starts = start_vectors(n).chain(std::iter::once_with(|| {
        let j = (0..n)
            .max_by(|&a, &b| norm2(&m.column(a)).total_cmp(&norm2(&m.column(b))))
            .unwrap_or(0);
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        e
    }));
    for v0 in starts {
        if let Some(theta) = power_iterate(v0, cfg, |v| m.matvec_transpose(&m.matvec(v)))? {
            return Ok(theta.sqrt());
        }
    }
    Ok(0.0)
}

/// Power-iteration estimate of `‖A⁻¹‖₂` via `x ↦ A⁻¹(A⁻ᵀx)`, two triangular
/// solve pairs per step.
pub fn inv_norm_power(f: &LuFactors, cfg: &LinalgConfig) -> Result<f64> {
    for v0 in start_vectors(f.dim()) {
        if let Some(theta) = power_iterate(v0, cfg, |v| f.solve(&f.solve_transpose(v)))? {
            return Ok(theta.sqrt());
        }
    }
    // A⁻¹A⁻ᵀ is positive definite, so a start vector is never annihilated.
    unreachable!("inverse Gram operator annihilated every start vector")
}

fn start_vectors(n: usize) -> impl Iterator<Item = Vec<f64>> {
    let ones = vec![1.0; n];
    let alternating: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    [ones, alternating].into_iter()
}

/// Returns `None` when the first Rayleigh quotient is zero.
fn power_iterate(
    mut v: Vec<f64>,
    cfg: &LinalgConfig,
    apply: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<Option<f64>> {
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut prev = f64::NAN;
    for _ in 0..cfg.power_max_iter {
        let w = apply(&v);
        let theta = dot(&v, &w);
        let nw = norm2(&w);
        if prev.is_nan() && (theta == 0.0 || nw == 0.0) {
            return Ok(None);
        }
        if nw == 0.0 {
            return Ok(Some(theta.max(0.0)));
        }
        if (theta - prev).abs() <= cfg.power_tol * theta.abs() {
            return Ok(Some(theta));
        }
        prev = theta;
        v = w.into_iter().map(|x| x / nw).collect();
    }
    Err(AveError::ConvergenceFailure {
        what: "power iteration",
        iterations: cfg.power_max_iter,
    })
}
