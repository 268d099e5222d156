//! Self-contained dense real linear algebra.

mod eigen;
mod lu;
mod matrix;
mod norm;

pub use eigen::{
    eigenvalues, eigenvalues_with, spectral_radius, spectral_radius_with, symmetric_eigenvalues,
    Eigenvalue,
};
pub use lu::{lu_factor, lu_factor_with, lu_solve, LuFactors};
pub use matrix::{abs_elementwise, Abs, DenseMatrix, Vector};
pub use norm::{inv_norm, inv_norm_power, power_norm_estimate, spectral_norm};

pub(crate) use matrix::norm2;

/// Relative pivot magnitude below which a factorization is declared singular.
pub const PIVOT_FLOOR: f64 = 1e-14;
/// Relative stopping tolerance for power iteration.
pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 50_000;
/// QR sweeps allowed per matrix dimension before giving up.
pub const QR_SWEEPS_PER_DIM: usize = 100;

/// Tolerances for the linear algebra kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinalgConfig {
    pub pivot_floor: f64,
    pub power_tol: f64,
    pub power_max_iter: usize,
    pub qr_sweeps_per_dim: usize,
}

impl Default for LinalgConfig {
    fn default() -> Self {
        Self {
            pivot_floor: PIVOT_FLOOR,
            power_tol: POWER_TOL,
            power_max_iter: POWER_MAX_ITER,
            qr_sweeps_per_dim: QR_SWEEPS_PER_DIM,
        }
    }
}
