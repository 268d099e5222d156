//! Fixed-point iterations for the absolute value equation `Ax − |x| = b`,
//! with the splitting they are built on, sufficient convergence conditions,
//! problem generators and a brute-force oracle for small instances.

pub mod conditions;
pub mod error;
pub mod io;
pub mod linalg;
pub mod problems;
pub mod solvers;
pub mod splitting;

pub use conditions::{
    check_all, check_t11, check_t12, check_t31, check_t32, g_alg3, g_alg4, ConditionId,
    ConditionReport, LowerTriangularObjective, PredictorObjective, WMatrix,
};
pub use error::{AveError, Result};
pub use linalg::{DenseMatrix, LuFactors, Vector};
pub use problems::{
    gen_example1, gen_example2, gen_random, gen_tridiag, sign_enum_oracle, Example1Params,
    Example2Params,
};
pub use solvers::{
    residual, solve, Algorithm, AveProblem, EMatrixSpec, Provenance, ResidualMode, SolveReport,
    SolveStatus, SolverConfig,
};
pub use splitting::{split, Splitting};
