//! Sufficient conditions for convergence and unique solvability, and the
//! relaxation objectives used to pick `λ`.
//!
//! | id  | quantity compared to 1 |
//! |-----|------------------------|
//! | T11 | `ρ(R⁻¹S)`, `R = I − λE|M|`, `S = λE + |I − λEN|` |
//! | T12 | `ρ(G⁻¹J)`, `G = I − D⁻¹|M|`, `J = I + λE − |λEA + D⁻¹M|` |
//! | T31 | `λ‖E‖ + ‖I − λEN‖ + λ‖A⁻¹‖‖EM‖` |
//! | T32 | `‖λE‖ + ‖I − λEA − D⁻¹M‖ + ‖D⁻¹M‖‖A⁻¹‖` |
//!
//! T11/T12 guarantee convergence of the implicit schemes, T31/T32 of the
//! predictor schemes. All norms are spectral norms.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AveError, Result};
use crate::linalg::{inv_norm, lu_factor, spectral_norm, spectral_radius, DenseMatrix, LuFactors};
use crate::solvers::EMatrixSpec;
use crate::splitting::{split, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    T11,
    T12,
    T31,
    T32,
}

impl ConditionId {
    pub const ALL: [ConditionId; 4] = [Self::T11, Self::T12, Self::T31, Self::T32];
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The 2×2 nonnegative contraction matrix bounding successive differences
/// `(‖Δy‖, ‖Δx‖)` of the predictor scheme:
/// `[[0, ‖A⁻¹‖], [0, λ‖E‖ + ‖I − λEN‖ + ‖A⁻¹‖·λ‖EM‖]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WMatrix {
    pub entries: [[f64; 2]; 2],
}

impl WMatrix {
    /// Upper triangular with a zero corner, so `ρ(W)` is the (2,2) entry.
    pub fn spectral_radius(&self) -> f64 {
        self.entries[1][1].abs()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_rows(&[self.entries[0].to_vec(), self.entries[1].to_vec()])
            .expect("W entries are finite")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    /// `None` when the quantity could not be evaluated (see `notes`).
    pub value: Option<f64>,
    /// `value < 1`.
    pub holds: bool,
    pub components: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<WMatrix>,
}

impl ConditionReport {
    fn evaluated(condition: ConditionId, value: f64) -> Self {
        Self {
            condition,
            value: Some(value),
            holds: value < 1.0,
            components: BTreeMap::new(),
            notes: Vec::new(),
            w: None,
        }
    }

    /// A report for a condition that could not be evaluated.
    pub fn failed(condition: ConditionId, reason: impl Into<String>) -> Self {
        Self {
            condition,
            value: None,
            holds: false,
            components: BTreeMap::new(),
            notes: vec![reason.into()],
            w: None,
        }
    }

    fn with_component(mut self, name: &str, v: f64) -> Self {
        self.components.insert(name.to_string(), v);
        self
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(AveError::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )))
    }
}

struct Prepared {
    s: Splitting,
    e: DenseMatrix,
    notes: Vec<String>,
}

fn prepare(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<Prepared> {
    check_lambda(lambda)?;
    let s = split(a)?;
    let resolved = e.resolve(&s)?;
    let mut notes = Vec::new();
    if !resolved.is_diagonal() {
        notes.push("E = N_A^-1 is not diagonal; outside the positive diagonal E hypothesis".into());
    }
    Ok(Prepared {
        s,
        e: resolved.to_dense(),
        notes,
    })
}

/// `ρ(F⁻¹ K)`, or a breakdown report when `F` is singular.
fn radius_of_quotient(
    id: ConditionId,
    f: &DenseMatrix,
    k: &DenseMatrix,
    f_name: &str,
    mut notes: Vec<String>,
) -> Result<ConditionReport> {
    let lu = match lu_factor(f) {
        Ok(lu) => lu,
        Err(AveError::SingularMatrix { step, pivot }) => {
            let mut r = ConditionReport::failed(
                id,
                format!("breakdown: {f_name} is singular (pivot {pivot:.3e} at step {step})"),
            );
            r.notes.append(&mut notes);
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let value = spectral_radius(&lu.solve_matrix(k))?;
    let mut r = ConditionReport::evaluated(id, value);
    r.notes = notes;
    Ok(r)
}

/// `ρ(R⁻¹S) < 1` with `R = I − λE|M|`, `S = λE + |I − λEN|`.
pub fn check_t11(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<ConditionReport> {
    let Prepared { s, e, notes } = prepare(a, lambda, e)?;
    let n = s.dim();
    let id = DenseMatrix::identity(n);
    let le = e.scale(lambda);
    let r = id.sub(&le.matmul(&s.m.map(f64::abs)));
    let sm = le.add(&id.sub(&le.matmul(&s.n)).map(f64::abs));
    radius_of_quotient(ConditionId::T11, &r, &sm, "R", notes)
}

/// `ρ(G⁻¹J) < 1` with `G = I − D⁻¹|M|`, `J = I + λE − |λEA + D⁻¹M|`.
pub fn check_t12(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<ConditionReport> {
    let Prepared { s, e, notes } = prepare(a, lambda, e)?;
    let n = s.dim();
    let d_inv = s.inv_diag_entries()?;
    let id = DenseMatrix::identity(n);
    let le = e.scale(lambda);
    let g = id.sub(&s.m.map(f64::abs).scale_rows(&d_inv));
    let j = id
        .add(&le)
        .sub(&le.matmul(a).add(&s.m.scale_rows(&d_inv)).map(f64::abs));
    radius_of_quotient(ConditionId::T12, &g, &j, "G", notes)
}

fn factor_named(m: &DenseMatrix, name: &str) -> Result<LuFactors> {
    lu_factor(m).map_err(|err| match err {
        AveError::SingularMatrix { step, pivot } => AveError::Breakdown(format!(
            "{name} is singular (pivot {pivot:.3e} at step {step})"
        )),
        other => other,
    })
}

/// `λ‖E‖ + ‖I − λEN‖ + λ‖A⁻¹‖‖EM‖ < 1`; also emits the matching [`WMatrix`].
pub fn check_t31(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<ConditionReport> {
    let Prepared { s, e, notes } = prepare(a, lambda, e)?;
    let n = s.dim();
    let lu_a = lu_factor(a)?;
    factor_named(&s.n, "N_A")?;
    let inv_a = inv_norm(&lu_a)?;
    let t1 = lambda * spectral_norm(&e)?;
    let t2 = spectral_norm(&DenseMatrix::identity(n).sub(&e.matmul(&s.n).scale(lambda)))?;
    let em = spectral_norm(&e.matmul(&s.m))?;
    let t3 = lambda * inv_a * em;
    let value = t1 + t2 + t3;
    let mut r = ConditionReport::evaluated(ConditionId::T31, value)
        .with_component("lambda_norm_e", t1)
        .with_component("norm_i_minus_lambda_e_n", t2)
        .with_component("lambda_inv_norm_a_norm_e_m", t3)
        .with_component("inv_norm_a", inv_a);
    r.notes = notes;
    r.w = Some(WMatrix {
        entries: [[0.0, inv_a], [0.0, value]],
    });
    Ok(r)
}

/// `‖λE‖ + ‖I − λEA − D⁻¹M‖ + ‖D⁻¹M‖‖A⁻¹‖ < 1`.
///
/// Also notes (without failing) when `D⁻¹M + λEA` is singular.
pub fn check_t32(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<ConditionReport> {
    let Prepared { s, e, mut notes } = prepare(a, lambda, e)?;
    let n = s.dim();
    let d_inv_m = s.d_inv_m()?;
    let lu_a = lu_factor(a)?;
    let inv_a = inv_norm(&lu_a)?;
    let lea = e.matmul(a).scale(lambda);
    let t1 = spectral_norm(&e.scale(lambda))?;
    let t2 = spectral_norm(&DenseMatrix::identity(n).sub(&lea).sub(&d_inv_m))?;
    let dm = spectral_norm(&d_inv_m)?;
    let t3 = dm * inv_a;
    if lu_factor(&d_inv_m.add(&lea)).is_err() {
        notes.push("side hypothesis violated: D_A^-1 M_A + lambda E A is singular".into());
    }
    let mut r = ConditionReport::evaluated(ConditionId::T32, t1 + t2 + t3)
        .with_component("norm_lambda_e", t1)
        .with_component("norm_i_minus_lambda_e_a_minus_d_inv_m", t2)
        .with_component("norm_d_inv_m_inv_norm_a", t3)
        .with_component("inv_norm_a", inv_a);
    r.notes = notes;
    Ok(r)
}

pub fn check(id: ConditionId, a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Result<ConditionReport> {
    match id {
        ConditionId::T11 => check_t11(a, lambda, e),
        ConditionId::T12 => check_t12(a, lambda, e),
        ConditionId::T31 => check_t31(a, lambda, e),
        ConditionId::T32 => check_t32(a, lambda, e),
    }
}

/// All four reports; a check that errors yields a failed report carrying the error.
pub fn check_all(a: &DenseMatrix, lambda: f64, e: &EMatrixSpec) -> Vec<ConditionReport> {
    ConditionId::ALL
        .iter()
        .map(|&id| check(id, a, lambda, e).unwrap_or_else(|err| ConditionReport::failed(id, err.to_string())))
        .collect()
}

/// `g(λ) = |1 − λ| + λ‖N⁻¹‖ + λ‖I − N⁻¹A‖‖A⁻¹‖`, the T31 quantity at `E = N⁻¹`.
///
/// Piecewise linear: slope `μ₁ = c − 1` on `(0, 1]` and `μ₂ = c + 1` on
/// `[1, ∞)` with `c = ‖N⁻¹‖ + ‖I − N⁻¹A‖‖A⁻¹‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorObjective {
    pub inv_norm_n: f64,
    pub coupling: f64,
}

impl PredictorObjective {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let s = split(a)?;
        let lu_n = lu_factor(&s.n)?;
        let lu_a = lu_factor(a)?;
        let n = s.dim();
        let inv_norm_n = inv_norm(&lu_n)?;
        let i_minus = DenseMatrix::identity(n).sub(&lu_n.solve_matrix(a));
        let coupling = spectral_norm(&i_minus)? * inv_norm(&lu_a)?;
        Ok(Self { inv_norm_n, coupling })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        (1.0 - lambda).abs() + lambda * self.inv_norm_n + lambda * self.coupling
    }

    /// `(μ₁, μ₂)`.
    pub fn slopes(&self) -> (f64, f64) {
        let c = self.inv_norm_n + self.coupling;
        (c - 1.0, c + 1.0)
    }
}

pub fn g_alg3(a: &DenseMatrix, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(PredictorObjective::new(a)?.eval(lambda))
}

/// `g(λ) = |1 − λ|‖D⁻¹A‖ + λ‖D⁻¹‖ + ‖D⁻¹L‖‖A⁻¹‖`, the T32 quantity at
/// `E = D⁻¹` for lower triangular `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerTriangularObjective {
    pub norm_d_inv_a: f64,
    pub norm_d_inv: f64,
    pub offset: f64,
}

impl LowerTriangularObjective {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        a.ensure_square()?;
        if let Some((row, col)) = a.first_upper_nonzero() {
            return Err(AveError::NotLowerTriangular { row, col });
        }
        let s = split(a)?;
        let d_inv = s.inv_diag_entries()?;
        let lu_a = lu_factor(a)?;
        let norm_d_inv = d_inv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            norm_d_inv_a: spectral_norm(&a.scale_rows(&d_inv))?,
            norm_d_inv,
            offset: spectral_norm(&s.l.scale_rows(&d_inv))? * inv_norm(&lu_a)?,
        })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        (1.0 - lambda).abs() * self.norm_d_inv_a + lambda * self.norm_d_inv + self.offset
    }

    /// `(α₁, α₂) = (‖D⁻¹‖ − ‖D⁻¹A‖, ‖D⁻¹‖ + ‖D⁻¹A‖)`.
    pub fn slopes(&self) -> (f64, f64) {
        (
            self.norm_d_inv - self.norm_d_inv_a,
            self.norm_d_inv + self.norm_d_inv_a,
        )
    }
}

pub fn g_alg4(a: &DenseMatrix, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(LowerTriangularObjective::new(a)?.eval(lambda))
}
