//! Fixtures shared by the benchmarks.

use ave_core::problems::{gen_example1, gen_example2, Example1Params, Example2Params};
use ave_core::{AveProblem, DenseMatrix};

/// Block size of the n = 400 benchmark family.
pub const BLOCK: usize = 20;

pub fn example1(m: usize) -> AveProblem {
    gen_example1(Example1Params { m, mu: 4.0 }).expect("valid parameters")
}

pub fn example2(m: usize) -> AveProblem {
    gen_example2(Example2Params { m, theta: 4.0 }).expect("valid parameters")
}

/// `tridiag(−3, 9, −3)` of size `n`.
pub fn toeplitz(n: usize) -> DenseMatrix {
    DenseMatrix::tridiagonal(n, -3.0, 9.0, -3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(example1(BLOCK).dim(), 400);
        assert_eq!(example2(3).dim(), 9);
        assert_eq!(toeplitz(5).rows(), 5);
    }
}
