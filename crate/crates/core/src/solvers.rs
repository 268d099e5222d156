//! Fixed-point iterations for `Ax − |x| = b`.
//!
//! All four schemes share the splitting `A = N − M` and a relaxation pair
//! `(λ, E)`:
//!
//! | scheme | update |
//! |--------|--------|
//! | [`Algorithm::Alg1`] | `(I − λEM) x⁺ = x − λE(Nx − |x| − b)` |
//! | [`Algorithm::Alg2`] | `(I − D⁻¹M) x⁺ = x − λE(Ax − |x| − b) − D⁻¹M x` |
//! | [`Algorithm::Alg3`] | `y = A⁻¹(|x| + b)`, `x⁺ = x − λE(−My + Nx − |x| − b)` |
//! | [`Algorithm::Alg4`] | `y = A⁻¹(|x| + b)`, `x⁺ = x + D⁻¹M y − λE(Ax − |x| − b) − D⁻¹M x` |
//!
//! The implicit schemes factor their system matrix once and reuse it. The
//! predictor schemes factor `A` once. Every run records the relative residual
//! `‖b + |x| − Ax‖ / ‖b‖` of the starting point and of each iterate; the
//! stopping test applies to the starting point as well, so an exact `x⁰`
//! reports zero iterations.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{AveError, Result};
use crate::linalg::{lu_factor, norm2, DenseMatrix, LuFactors, Vector};
use crate::splitting::{split, Splitting};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_K_MAX: usize = 500;

/// Where a generated problem came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: std::collections::BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// An instance of `Ax − |x| = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AveProblem {
    a: DenseMatrix,
    b: Vector,
    x_star: Option<Vector>,
    provenance: Option<Provenance>,
}

impl AveProblem {
    pub fn new(a: DenseMatrix, b: Vector) -> Result<Self> {
        let n = a.ensure_square()?;
        if b.dim() != n {
            return Err(AveError::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        Ok(Self {
            a,
            b,
            x_star: None,
            provenance: None,
        })
    }

    /// Attaches a known solution after checking `‖Ax* − |x*| − b‖ ≤ 1e-10 (1 + ‖b‖)`.
    pub fn with_solution(mut self, x_star: Vector) -> Result<Self> {
        if x_star.dim() != self.dim() {
            return Err(AveError::DimensionMismatch {
                expected: self.dim(),
                found: x_star.dim(),
            });
        }
        let r = absolute_residual(&self, &x_star);
        if r > 1e-10 * (1.0 + self.b.norm2()) {
            return Err(AveError::InvalidParameter(format!(
                "stated solution has residual {r:.3e}"
            )));
        }
        self.x_star = Some(x_star);
        Ok(self)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn x_star(&self) -> Option<&Vector> {
        self.x_star.as_ref()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "1")]
    Alg1,
    #[serde(rename = "2")]
    Alg2,
    #[serde(rename = "3")]
    Alg3,
    #[serde(rename = "4")]
    Alg4,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::Alg1, Self::Alg2, Self::Alg3, Self::Alg4];

    pub fn number(self) -> u8 {
        match self {
            Self::Alg1 => 1,
            Self::Alg2 => 2,
            Self::Alg3 => 3,
            Self::Alg4 => 4,
        }
    }

    /// Schemes with a predictor step `y = A⁻¹(|x| + b)`.
    pub fn has_predictor(self) -> bool {
        matches!(self, Self::Alg3 | Self::Alg4)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Algorithm {
    type Err = AveError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches("alg") {
            "1" => Ok(Self::Alg1),
            "2" => Ok(Self::Alg2),
            "3" => Ok(Self::Alg3),
            "4" => Ok(Self::Alg4),
            other => Err(AveError::Parse(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Choice of the relaxation matrix `E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EMatrixSpec {
    Identity,
    /// `E = D_A⁻¹`.
    InvDiagA,
    /// `E = N_A⁻¹`; not diagonal in general.
    InvNA,
    /// Positive diagonal entries.
    ExplicitDiagonal(Vec<f64>),
}

impl EMatrixSpec {
    pub fn resolve(&self, s: &Splitting) -> Result<EMatrix> {
        let n = s.dim();
        match self {
            Self::Identity => Ok(EMatrix::Diagonal(vec![1.0; n])),
            Self::InvDiagA => Ok(EMatrix::Diagonal(s.inv_diag_entries()?)),
            Self::InvNA => {
                let f = lu_factor(&s.n)?;
                if s.n.is_diagonal() {
                    Ok(EMatrix::Diagonal(s.n.diagonal().iter().map(|d| 1.0 / d).collect()))
                } else {
                    Ok(EMatrix::InverseOf(f))
                }
            }
            Self::ExplicitDiagonal(d) => {
                if d.len() != n {
                    return Err(AveError::DimensionMismatch {
                        expected: n,
                        found: d.len(),
                    });
                }
                if let Some(i) = d.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(AveError::InvalidParameter(format!(
                        "E diagonal entry {i} must be strictly positive, got {}",
                        d[i]
                    )));
                }
                Ok(EMatrix::Diagonal(d.clone()))
            }
        }
    }

    /// CLI token: `identity`, `dA-inv`, `nA-inv`, or `diag`.
    pub fn token(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::InvDiagA => "dA-inv",
            Self::InvNA => "nA-inv",
            Self::ExplicitDiagonal(_) => "diag",
        }
    }
}

/// A resolved `E`, applied as an operator.
#[derive(Debug, Clone)]
pub enum EMatrix {
    Diagonal(Vec<f64>),
    /// Inverse of a factored matrix, applied by solves.
    InverseOf(LuFactors),
}

impl EMatrix {
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Self::Diagonal(_))
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Self::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            Self::InverseOf(f) => f.solve(v),
        }
    }

    /// `E · m`.
    pub fn mul_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        match self {
            Self::Diagonal(d) => m.scale_rows(d),
            Self::InverseOf(f) => f.solve_matrix(m),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Self::Diagonal(d) => {
                DenseMatrix::from_diagonal(d).expect("resolved diagonal is finite and non-empty")
            }
            Self::InverseOf(f) => f.inverse(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ResidualMode {
    /// `‖b + |x| − Ax‖ / ‖b‖`; undefined for `b = 0`.
    #[default]
    Relative,
    /// `‖b + |x| − Ax‖`.
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub lambda: f64,
    pub e: EMatrixSpec,
    pub tol: f64,
    pub k_max: usize,
    /// Starting point; zero vector when `None`.
    pub x0: Option<Vector>,
    pub residual: ResidualMode,
    /// Keep every iterate (and predictor) in the report.
    pub record_iterates: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, lambda: f64, e: EMatrixSpec) -> Self {
        Self {
            algorithm,
            lambda,
            e,
            tol: DEFAULT_TOL,
            k_max: DEFAULT_K_MAX,
            x0: None,
            residual: ResidualMode::Relative,
            record_iterates: false,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(AveError::InvalidParameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(AveError::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.k_max == 0 {
            return Err(AveError::InvalidParameter("k_max must be at least 1".into()));
        }
        if let Some(x0) = &self.x0 {
            if x0.dim() != n {
                return Err(AveError::DimensionMismatch {
                    expected: n,
                    found: x0.dim(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    /// An iterate became non-finite.
    Breakdown,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Converged => "Converged",
            Self::MaxIterations => "MaxIterations",
            Self::Breakdown => "Breakdown",
        })
    }
}

impl FromStr for SolveStatus {
    type Err = AveError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Converged" => Ok(Self::Converged),
            "MaxIterations" => Ok(Self::MaxIterations),
            "Breakdown" => Ok(Self::Breakdown),
            other => Err(AveError::Parse(format!("unknown status '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub status: SolveStatus,
    /// Completed updates (IT).
    pub iterations: usize,
    /// Residual of `x⁰, x¹, …`; length `iterations + 1`.
    pub residual_history: Vec<f64>,
    pub elapsed_seconds: f64,
    pub final_x: Vector,
    pub final_y: Option<Vector>,
    /// `‖x − y‖` at convergence for the predictor schemes.
    pub x_minus_y: Option<f64>,
    /// False when `E = N_A⁻¹` is not diagonal.
    pub e_diagonal: bool,
    pub iterates: Option<Vec<Vector>>,
    pub predictors: Option<Vec<Vector>>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().expect("history holds the starting residual")
    }
}

fn residual_vector(p: &AveProblem, x: &[f64]) -> Vec<f64> {
    let ax = p.a.matvec(x);
    p.b.iter()
        .zip(x)
        .zip(ax)
        .map(|((b, xi), axi)| b + xi.abs() - axi)
        .collect()
}

fn absolute_residual(p: &AveProblem, x: &[f64]) -> f64 {
    norm2(&residual_vector(p, x))
}

/// Relative residual `‖b + |x| − Ax‖ / ‖b‖`.
pub fn residual(p: &AveProblem, x: &Vector) -> Result<f64> {
    residual_with(p, x, ResidualMode::Relative)
}

pub fn residual_with(p: &AveProblem, x: &[f64], mode: ResidualMode) -> Result<f64> {
    if x.len() != p.dim() {
        return Err(AveError::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    let r = absolute_residual(p, x);
    match mode {
        ResidualMode::Absolute => Ok(r),
        ResidualMode::Relative => {
            let nb = p.b.norm2();
            if nb == 0.0 {
                Err(AveError::ZeroRhs)
            } else {
                Ok(r / nb)
            }
        }
    }
}

/// Runs the scheme selected by `c.algorithm`.
pub fn solve(p: &AveProblem, c: &SolverConfig) -> Result<SolveReport> {
    match c.algorithm {
        Algorithm::Alg1 => solve_alg1(p, c),
        Algorithm::Alg2 => solve_alg2(p, c),
        Algorithm::Alg3 => solve_alg3(p, c),
        Algorithm::Alg4 => solve_alg4(p, c),
    }
}

struct Setup {
    s: Splitting,
    e: EMatrix,
}

fn setup(p: &AveProblem, c: &SolverConfig) -> Result<Setup> {
    c.validate(p.dim())?;
    let s = split(&p.a)?;
    let e = c.e.resolve(&s)?;
    Ok(Setup { s, e })
}

fn factor_implicit(m: &DenseMatrix, what: &str) -> Result<LuFactors> {
    lu_factor(m).map_err(|err| match err {
        AveError::SingularMatrix { step, pivot } => AveError::Breakdown(format!(
            "{what} is singular (pivot {pivot:.3e} at step {step})"
        )),
        other => other,
    })
}

/// `|x| + b`.
fn abs_plus_b(x: &[f64], b: &[f64]) -> Vec<f64> {
    x.iter().zip(b).map(|(xi, bi)| xi.abs() + bi).collect()
}

pub fn solve_alg1(p: &AveProblem, c: &SolverConfig) -> Result<SolveReport> {
    let Setup { s, e } = setup(p, c)?;
    let n = p.dim();
    let lambda = c.lambda;
    let system = DenseMatrix::identity(n).sub(&e.mul_matrix(&s.m).scale(lambda));
    let lu = factor_implicit(&system, "I - lambda E M_A")?;
    let b = p.b.as_slice();
    let e_diagonal = e.is_diagonal();
    drive(p, c, e_diagonal, |x| {
        let nx = s.n.matvec(x);
        let inner: Vec<f64> = nx
            .iter()
            .zip(abs_plus_b(x, b))
            .map(|(a, c)| a - c)
            .collect();
        let corr = e.apply(&inner);
        let rhs: Vec<f64> = x.iter().zip(&corr).map(|(xi, ci)| xi - lambda * ci).collect();
        (lu.solve(&rhs), None)
    })
}

pub fn solve_alg2(p: &AveProblem, c: &SolverConfig) -> Result<SolveReport> {
    let Setup { s, e } = setup(p, c)?;
    let n = p.dim();
    let lambda = c.lambda;
    let d_inv_m = s.d_inv_m()?;
    let system = DenseMatrix::identity(n).sub(&d_inv_m);
    let lu = factor_implicit(&system, "I - D_A^-1 M_A")?;
    let b = p.b.as_slice();
    drive(p, c, e.is_diagonal(), |x| {
        let corr = e.apply(&negated_residual(p, x, b));
        let dmx = d_inv_m.matvec(x);
        let rhs: Vec<f64> = (0..n).map(|i| x[i] - lambda * corr[i] - dmx[i]).collect();
        (lu.solve(&rhs), None)
    })
}

pub fn solve_alg3(p: &AveProblem, c: &SolverConfig) -> Result<SolveReport> {
    let Setup { s, e } = setup(p, c)?;
    let n = p.dim();
    let lambda = c.lambda;
    let lu_a = lu_factor(&p.a)?;
    let b = p.b.as_slice();
    drive(p, c, e.is_diagonal(), |x| {
        let rhs = abs_plus_b(x, b);
        let y = lu_a.solve(&rhs);
        let my = s.m.matvec(&y);
        let nx = s.n.matvec(x);
        let inner: Vec<f64> = (0..n).map(|i| -my[i] + nx[i] - rhs[i]).collect();
        let corr = e.apply(&inner);
        let xn = (0..n).map(|i| x[i] - lambda * corr[i]).collect();
        (xn, Some(y))
    })
}

pub fn solve_alg4(p: &AveProblem, c: &SolverConfig) -> Result<SolveReport> {
    let Setup { s, e } = setup(p, c)?;
    let n = p.dim();
    let lambda = c.lambda;
    let lu_a = lu_factor(&p.a)?;
    let d_inv_m = s.d_inv_m()?;
    let b = p.b.as_slice();
    drive(p, c, e.is_diagonal(), |x| {
        let y = lu_a.solve(&abs_plus_b(x, b));
        let dmy = d_inv_m.matvec(&y);
        let dmx = d_inv_m.matvec(x);
        let corr = e.apply(&negated_residual(p, x, b));
        let xn = (0..n)
            .map(|i| x[i] + dmy[i] - lambda * corr[i] - dmx[i])
            .collect();
        (xn, Some(y))
    })
}

/// `Ax − |x| − b`.
fn negated_residual(p: &AveProblem, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = p.a.matvec(x);
    (0..x.len()).map(|i| ax[i] - x[i].abs() - b[i]).collect()
}

fn drive(
    p: &AveProblem,
    c: &SolverConfig,
    e_diagonal: bool,
    mut step: impl FnMut(&[f64]) -> (Vec<f64>, Option<Vec<f64>>),
) -> Result<SolveReport> {
    let mut x: Vec<f64> = match &c.x0 {
        Some(x0) => x0.to_vec(),
        None => vec![0.0; p.dim()],
    };
    let mut y: Option<Vec<f64>> = None;
    let mut history = vec![residual_with(p, &x, c.residual)?];
    let mut iterates = c.record_iterates.then(|| vec![x.clone()]);
    let mut predictors = (c.record_iterates && c.algorithm.has_predictor()).then(Vec::new);

    let start = Instant::now();
    let mut status = if history[0] <= c.tol {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    let mut k = 0;
    while status != SolveStatus::Converged && k < c.k_max {
        let (xn, yn) = step(&x);
        if xn.iter().any(|v| !v.is_finite()) {
            status = SolveStatus::Breakdown;
            break;
        }
        let r = residual_with(p, &xn, c.residual)?;
        if !r.is_finite() {
            status = SolveStatus::Breakdown;
            break;
        }
        k += 1;
        x = xn;
        if let (Some(list), Some(yv)) = (predictors.as_mut(), yn.as_ref()) {
            list.push(Vector::new(yv.clone())?);
        }
        y = yn;
        if let Some(list) = iterates.as_mut() {
            list.push(x.clone());
        }
        history.push(r);
        if r <= c.tol {
            status = SolveStatus::Converged;
        }
    }
    let elapsed_seconds = start.elapsed().as_secs_f64();

    let x_minus_y = match (&y, status) {
        (Some(yv), SolveStatus::Converged) => {
            Some(norm2(&x.iter().zip(yv).map(|(a, b)| a - b).collect::<Vec<_>>()))
        }
        _ => None,
    };
    Ok(SolveReport {
        algorithm: c.algorithm,
        status,
        iterations: k,
        residual_history: history,
        elapsed_seconds,
        final_x: Vector::new(x)?,
        final_y: y.map(Vector::new).transpose()?,
        x_minus_y,
        e_diagonal,
        iterates: iterates
            .map(|v| v.into_iter().map(Vector::new).collect::<Result<Vec<_>>>())
            .transpose()?,
        predictors,
    })
}
