//! Benchmark families, random instances and the sign-enumeration oracle.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AveError, Result};
use crate::linalg::{lu_factor, DenseMatrix, Vector};
use crate::solvers::{AveProblem, Provenance};

/// Largest dimension the oracle will enumerate (`2ⁿ` patterns).
pub const ORACLE_MAX_DIM: usize = 20;
/// Entries at or below this magnitude count as zero for sign consistency.
pub const ORACLE_ZERO_TOL: f64 = 1e-12;
/// Solutions closer than this in max norm are merged.
pub const ORACLE_DEDUP_TOL: f64 = 1e-8;

/// Block-tridiagonal family of size `n = m²` with a diagonal shift `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Params {
    pub m: usize,
    pub mu: f64,
}

/// Block lower-bidiagonal family of size `n = m²` with diagonal `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Params {
    pub m: usize,
    pub theta: f64,
}

impl Example1Params {
    pub fn n(&self) -> usize {
        self.m * self.m
    }
}

impl Example2Params {
    pub fn n(&self) -> usize {
        self.m * self.m
    }
}

/// `x*ᵢ = (−1)ⁱ` for 1-based `i`, i.e. `(−1, 1, −1, 1, …)`.
pub fn alternating_solution(n: usize) -> Vector {
    Vector::new((0..n).map(|i| if i % 2 == 0 { -1.0 } else { 1.0 }).collect())
        .expect("alternating vector is finite and non-empty")
}

/// Builds `b = Ax* − |x*|` and attaches `x*`.
pub fn problem_from_solution(a: DenseMatrix, x_star: Vector) -> Result<AveProblem> {
    let ax = a.matvec(&x_star);
    let b: Vec<f64> = ax.iter().zip(x_star.iter()).map(|(v, x)| v - x.abs()).collect();
    AveProblem::new(a, Vector::new(b)?)?.with_solution(x_star)
}

fn provenance(generator: &str, params: &[(&str, f64)], seed: Option<u64>) -> Provenance {
    Provenance {
        generator: generator.to_string(),
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        seed,
    }
}

fn ensure_block_size(m: usize) -> Result<()> {
    if m == 0 {
        Err(AveError::InvalidParameter("block size m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `A = tridiag(−1.5I, S, −0.5I) + μI` with `S = tridiag(−1.5, 8, −0.5)`.
pub fn gen_example1(p: Example1Params) -> Result<AveProblem> {
    ensure_block_size(p.m)?;
    let m = p.m;
    let n = p.n();
    let mut a = DenseMatrix::zeros(n, n);
    for blk in 0..m {
        for i in 0..m {
            let r = blk * m + i;
            a[(r, r)] = 8.0 + p.mu;
            if i > 0 {
                a[(r, r - 1)] = -1.5;
            }
            if i + 1 < m {
                a[(r, r + 1)] = -0.5;
            }
            if blk > 0 {
                a[(r, r - m)] = -1.5;
            }
            if blk + 1 < m {
                a[(r, r + m)] = -0.5;
            }
        }
    }
    Ok(problem_from_solution(a, alternating_solution(n))?
        .with_provenance(provenance("example1", &[("m", m as f64), ("mu", p.mu)], None)))
}

/// Diagonal blocks `S = tridiag(−1, θ, 0)`, subdiagonal blocks `−I`.
pub fn gen_example2(p: Example2Params) -> Result<AveProblem> {
    ensure_block_size(p.m)?;
    let m = p.m;
    let n = p.n();
    let mut a = DenseMatrix::zeros(n, n);
    for blk in 0..m {
        for i in 0..m {
            let r = blk * m + i;
            a[(r, r)] = p.theta;
            if i > 0 {
                a[(r, r - 1)] = -1.0;
            }
            if blk > 0 {
                a[(r, r - m)] = -1.0;
            }
        }
    }
    Ok(problem_from_solution(a, alternating_solution(n))?
        .with_provenance(provenance("example2", &[("m", m as f64), ("theta", p.theta)], None)))
}

/// Tridiagonal Toeplitz matrix with the alternating solution.
pub fn gen_tridiag(n: usize, sub: f64, diag: f64, sup: f64) -> Result<AveProblem> {
    if n == 0 {
        return Err(AveError::InvalidParameter("n must be at least 1".into()));
    }
    let a = DenseMatrix::tridiagonal(n, sub, diag, sup);
    Ok(problem_from_solution(a, alternating_solution(n))?.with_provenance(provenance(
        "tridiag",
        &[("n", n as f64), ("sub", sub), ("diag", diag), ("super", sup)],
        None,
    )))
}

/// Seeded diagonally dominant instance.
///
/// Off-diagonals are uniform in `[−1, 1]`; each diagonal entry is its row's
/// absolute off-diagonal sum plus `1 + dominance`; `x*` is uniform in `[−2, 2]`.
pub fn gen_random(n: usize, seed: u64, dominance: f64) -> Result<AveProblem> {
    if n == 0 {
        return Err(AveError::InvalidParameter("n must be at least 1".into()));
    }
    if !(dominance.is_finite() && dominance >= 0.0) {
        return Err(AveError::InvalidParameter(format!(
            "dominance must be non-negative, got {dominance}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if i != j {
                let v: f64 = rng.gen_range(-1.0..=1.0);
                a[(i, j)] = v;
                off += v.abs();
            }
        }
        a[(i, i)] = off + 1.0 + dominance;
    }
    let x_star = Vector::new((0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect())?;
    Ok(problem_from_solution(a, x_star)?.with_provenance(provenance(
        "random",
        &[("n", n as f64), ("dominance", dominance)],
        Some(seed),
    )))
}

/// An orthant, given by the sign of each coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(AveError::InvalidParameter("sign entries must be ±1".into()));
        }
        Ok(Self(signs))
    }

    /// Bit `i` of `bits` set means `sᵢ = −1`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// Whether `x` lies in the closed orthant, zeros allowed on either side.
    pub fn admits(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.0)
            .all(|(&v, &s)| v.abs() <= ORACLE_ZERO_TOL || (v > 0.0) == (s > 0))
    }
}

/// All solutions of `Ax − |x| = b` found by trying every orthant.
///
/// On the orthant with signs `s`, `|x| = diag(s) x`, so candidates solve
/// `(A − diag(s)) x = b`. Orthants whose system is singular are skipped.
/// Solutions are deduplicated and returned in lexicographic order.
pub fn sign_enum_oracle(p: &AveProblem) -> Result<Vec<Vector>> {
    let n = p.dim();
    if n > ORACLE_MAX_DIM {
        return Err(AveError::TooLarge {
            n,
            limit: ORACLE_MAX_DIM,
        });
    }
    let mut found: Vec<Vec<f64>> = Vec::new();
    for bits in 0..1u64 << n {
        let pattern = SignPattern::from_bits(bits, n);
        let mut system = p.a().clone();
        for (i, &s) in pattern.signs().iter().enumerate() {
            system[(i, i)] -= f64::from(s);
        }
        let Ok(f) = lu_factor(&system) else {
            continue;
        };
        let x = f.solve(p.b());
        if !pattern.admits(&x) {
            continue;
        }
        let duplicate = found.iter().any(|y| {
            y.iter()
                .zip(&x)
                .all(|(a, b)| (a - b).abs() <= ORACLE_DEDUP_TOL)
        });
        if !duplicate {
            found.push(x);
        }
    }
    found.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found.into_iter().map(Vector::new).collect()
}
