//! Plain-text matrix/vector files and problem bundles.
//!
//! A matrix file starts with a `n m` line followed by `n` lines of `m`
//! space-separated numbers. Vectors are `n × 1` matrices. Values are written
//! with 17 significant digits so they read back bit-for-bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AveError, Result};
use crate::linalg::{DenseMatrix, Vector};
use crate::solvers::{AveProblem, Provenance};

/// `v` with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// `v` with 6 significant digits, for human-facing tables.
pub fn fmt6(v: f64) -> String {
    format!("{v:.5e}")
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|&v| fmt17(v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_vector(v: &[f64]) -> String {
    let mut out = format!("{} 1\n", v.len());
    for &x in v {
        out.push_str(&fmt17(x));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> AveError {
    AveError::Parse(format!("line {line}: {msg}"))
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| AveError::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| parse_err(hl, format!("bad dimension {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(hl, "header must be `n m`"));
    };
    if rows == 0 || cols == 0 {
        return Err(parse_err(hl, "dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| AveError::Parse(format!("expected {rows} rows, found {r}")))?;
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|e| parse_err(ln, format!("bad number {tok:?}: {e}")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(parse_err(ln, format!("expected {cols} entries, found {}", data.len() - before)));
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after the last row"));
    }
    DenseMatrix::from_row_major(rows, cols, data)
}

pub fn parse_vector(text: &str) -> Result<Vector> {
    let m = parse_matrix(text)?;
    if m.cols() != 1 {
        return Err(AveError::Parse(format!("vector file must have 1 column, found {}", m.cols())));
    }
    Vector::new(m.as_slice().to_vec())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vector> {
    parse_vector(&fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    Ok(fs::write(path, format_matrix(a))?)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    Ok(fs::write(path, format_vector(v))?)
}

/// Contents of `problem.json` in a problem bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemHeader {
    pub n: usize,
    #[serde(default)]
    pub provenance: Option<Provenance>,
    pub has_solution: bool,
}

pub const HEADER_FILE: &str = "problem.json";
pub const MATRIX_FILE: &str = "A.txt";
pub const RHS_FILE: &str = "b.txt";
pub const SOLUTION_FILE: &str = "x_star.txt";

/// Writes `A.txt`, `b.txt`, optionally `x_star.txt`, and `problem.json` into `dir`.
pub fn save_problem(dir: impl AsRef<Path>, p: &AveProblem) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    write_matrix(dir.join(MATRIX_FILE), p.a())?;
    write_vector(dir.join(RHS_FILE), p.b())?;
    if let Some(x) = p.x_star() {
        write_vector(dir.join(SOLUTION_FILE), x)?;
    }
    let header = ProblemHeader {
        n: p.dim(),
        provenance: p.provenance().cloned(),
        has_solution: p.x_star().is_some(),
    };
    fs::write(dir.join(HEADER_FILE), serde_json::to_string_pretty(&header)?)?;
    Ok(())
}

pub fn load_problem(dir: impl AsRef<Path>) -> Result<AveProblem> {
    let dir = dir.as_ref();
    let header: ProblemHeader = serde_json::from_str(&fs::read_to_string(dir.join(HEADER_FILE))?)?;
    let a = read_matrix(dir.join(MATRIX_FILE))?;
    let b = read_vector(dir.join(RHS_FILE))?;
    if a.rows() != header.n {
        return Err(AveError::DimensionMismatch {
            expected: header.n,
            found: a.rows(),
        });
    }
    let mut p = AveProblem::new(a, b)?;
    if header.has_solution {
        p = p.with_solution(read_vector(dir.join(SOLUTION_FILE))?)?;
    }
    if let Some(prov) = header.provenance {
        p = p.with_provenance(prov);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{gen_example1, gen_random, Example1Params};

    #[test]
    fn matrix_round_trip_is_exact() {
        let a = DenseMatrix::from_rows(&[
            vec![0.1, -1.0 / 3.0, 1e-300],
            vec![f64::MAX, -0.0, std::f64::consts::PI],
        ])
        .unwrap();
        let back = parse_matrix(&format_matrix(&a)).unwrap();
        for (x, y) in a.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn parses_hand_written_files() {
        let a = parse_matrix("2 2\n4 -1\n-2 3\n").unwrap();
        assert_eq!(a, DenseMatrix::from_rows(&[vec![4.0, -1.0], vec![-2.0, 3.0]]).unwrap());
        let v = parse_vector("1 1\n3\n\n").unwrap();
        assert_eq!(v.as_slice(), &[3.0]);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(parse_matrix(""), Err(AveError::Parse(_))));
        assert!(matches!(parse_matrix("2\n1 2\n"), Err(AveError::Parse(_))));
        assert!(matches!(parse_matrix("2 2\n1 2\n3\n"), Err(AveError::Parse(_))));
        assert!(matches!(parse_matrix("1 2\n1 x\n"), Err(AveError::Parse(_))));
        assert!(matches!(parse_matrix("1 1\n1\n2\n"), Err(AveError::Parse(_))));
        assert!(matches!(parse_matrix("0 1\n"), Err(AveError::Parse(_))));
        assert!(matches!(parse_vector("1 2\n1 2\n"), Err(AveError::Parse(_))));
        assert!(parse_matrix("1 1\nNaN\n").is_err());
    }

    #[test]
    fn problem_bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for p in [
            gen_example1(Example1Params { m: 3, mu: 4.0 }).unwrap(),
            gen_random(5, 17, 2.0).unwrap(),
        ] {
            save_problem(dir.path(), &p).unwrap();
            assert_eq!(load_problem(dir.path()).unwrap(), p);
        }
    }

    #[test]
    fn bundle_without_solution() {
        let dir = tempfile::tempdir().unwrap();
        let p = AveProblem::new(DenseMatrix::identity(2), Vector::new(vec![1.0, 2.0]).unwrap()).unwrap();
        save_problem(dir.path(), &p).unwrap();
        let back = load_problem(dir.path()).unwrap();
        assert!(back.x_star().is_none());
        assert_eq!(back, p);
    }
}
