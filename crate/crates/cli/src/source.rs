//! Turning command-line arguments into problems, `E` choices and λ grids.

use std::collections::BTreeMap;
use std::path::Path;

use ave_core::io::{load_problem, read_matrix, read_vector};
use ave_core::problems::{
    gen_example1, gen_example2, gen_random, gen_tridiag, Example1Params, Example2Params,
};
use ave_core::{AveProblem, DenseMatrix, EMatrixSpec};

use crate::args::ProblemArgs;
use crate::error::{config, Result};

/// Endpoint slack for `start:step:end` grids.
pub const GRID_SLACK: f64 = 1e-12;

struct KeyValues {
    flag: &'static str,
    values: BTreeMap<String, f64>,
}

impl KeyValues {
    fn parse(flag: &'static str, raw: &[String], allowed: &[&str]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for item in raw {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| config(format!("--{flag}: expected KEY=VALUE, got '{item}'")))?;
            if !allowed.contains(&k) {
                return Err(config(format!(
                    "--{flag}: unknown key '{k}' (expected one of {})",
                    allowed.join(", ")
                )));
            }
            let v: f64 = v
                .parse()
                .map_err(|_| config(format!("--{flag}: '{v}' is not a number")))?;
            values.insert(k.to_string(), v);
        }
        Ok(Self { flag, values })
    }

    fn float(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as usize),
            Some(v) => Err(config(format!("--{}: {key} must be a non-negative integer, got {v}", self.flag))),
        }
    }
}

impl ProblemArgs {
    fn chosen(&self) -> Result<&'static str> {
        let set: Vec<&'static str> = [
            ("example1", self.example1.is_some()),
            ("example2", self.example2.is_some()),
            ("tridiag", self.tridiag.is_some()),
            ("random", self.random.is_some()),
            ("matrix", self.matrix.is_some()),
            ("problem", self.problem.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, on)| on.then_some(name))
        .collect();
        match set[..] {
            [one] => {
                if self.rhs.is_some() && one != "matrix" {
                    return Err(config("--rhs is only valid together with --matrix"));
                }
                Ok(one)
            }
            [] => Err(config(
                "no problem given: use one of --example1, --example2, --tridiag, --random, --matrix or --problem",
            )),
            _ => Err(config(format!(
                "exactly one problem source allowed, got --{}",
                set.join(", --")
            ))),
        }
    }

    /// The full problem; `--matrix` needs `--rhs`.
    pub fn load(&self) -> Result<AveProblem> {
        let empty = Vec::new();
        match self.chosen()? {
            "example1" => {
                let kv = KeyValues::parse("example1", self.example1.as_ref().unwrap_or(&empty), &["m", "mu"])?;
                Ok(gen_example1(Example1Params {
                    m: kv.count("m", 20)?,
                    mu: kv.float("mu", 4.0),
                })?)
            }
            "example2" => {
                let kv = KeyValues::parse("example2", self.example2.as_ref().unwrap_or(&empty), &["m", "theta"])?;
                Ok(gen_example2(Example2Params {
                    m: kv.count("m", 20)?,
                    theta: kv.float("theta", 4.0),
                })?)
            }
            "tridiag" => {
                let kv = KeyValues::parse(
                    "tridiag",
                    self.tridiag.as_ref().unwrap_or(&empty),
                    &["n", "sub", "diag", "super"],
                )?;
                Ok(gen_tridiag(
                    kv.count("n", 500)?,
                    kv.float("sub", -3.0),
                    kv.float("diag", 9.0),
                    kv.float("super", -3.0),
                )?)
            }
            "random" => {
                let kv = KeyValues::parse(
                    "random",
                    self.random.as_ref().unwrap_or(&empty),
                    &["n", "seed", "dominance"],
                )?;
                let seed = kv.count("seed", 0)? as u64;
                Ok(gen_random(kv.count("n", 6)?, seed, kv.float("dominance", 2.0))?)
            }
            "matrix" => {
                let rhs = self
                    .rhs
                    .as_ref()
                    .ok_or_else(|| config("--matrix needs --rhs for this command"))?;
                let a = read_matrix(self.matrix.as_ref().expect("chosen"))?;
                Ok(AveProblem::new(a, read_vector(rhs)?)?)
            }
            _ => Ok(load_problem(self.problem.as_ref().expect("chosen"))?),
        }
    }

    /// Only `A`; `--matrix` works without `--rhs`.
    pub fn load_matrix(&self) -> Result<DenseMatrix> {
        if self.chosen()? == "matrix" && self.rhs.is_none() {
            return Ok(read_matrix(self.matrix.as_ref().expect("chosen"))?);
        }
        Ok(self.load()?.a().clone())
    }
}

/// `identity`, `dA-inv`, `nA-inv` or `diag:<path>`.
pub fn parse_e(token: &str) -> Result<EMatrixSpec> {
    match token {
        "identity" => Ok(EMatrixSpec::Identity),
        "dA-inv" => Ok(EMatrixSpec::InvDiagA),
        "nA-inv" => Ok(EMatrixSpec::InvNA),
        other => match other.strip_prefix("diag:") {
            Some(path) if !path.is_empty() => {
                let v = read_vector(Path::new(path))?;
                if let Some(i) = v.iter().position(|x| *x <= 0.0) {
                    return Err(config(format!("--E diag: entry {i} is not positive")));
                }
                Ok(EMatrixSpec::ExplicitDiagonal(v.into_inner()))
            }
            _ => Err(config(format!(
                "unknown --E '{other}' (expected identity, dA-inv, nA-inv or diag:<path>)"
            ))),
        },
    }
}

/// Points `start + i·step` up to `end`, which is included within [`GRID_SLACK`].
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, step, end] = parts[..] else {
        return Err(config(format!("--grid must be START:STEP:END, got '{text}'")));
    };
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| config(format!("--grid: '{s}' is not a finite number")))
    };
    let (start, step, end) = (num(start)?, num(step)?, num(end)?);
    if step <= 0.0 {
        return Err(config("--grid: step must be positive"));
    }
    let count = ((end - start) / step + GRID_SLACK).floor();
    if count < 1.0 {
        return Err(config("--grid must contain at least two increasing points"));
    }
    if count > 1e6 {
        return Err(config("--grid has too many points"));
    }
    Ok((0..=count as usize).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grid_includes_endpoint() {
        let g = parse_grid("0.1:0.1:1.9").unwrap();
        assert_eq!(g.len(), 19);
        assert!((g[9] - 1.0).abs() < 1e-12);
        assert!((g[18] - 1.9).abs() < 1e-12);
        assert_eq!(parse_grid("0:0.5:1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0:0.3:1").unwrap().len(), 4);
    }

    #[test]
    fn grid_rejects_bad_input() {
        for bad in ["1:0.1", "0:0:1", "0:-1:1", "1:0.1:1", "1:0.1:0", "a:b:c", "0:1:inf"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn e_tokens() {
        assert_eq!(parse_e("identity").unwrap(), EMatrixSpec::Identity);
        assert_eq!(parse_e("dA-inv").unwrap(), EMatrixSpec::InvDiagA);
        assert_eq!(parse_e("nA-inv").unwrap(), EMatrixSpec::InvNA);
        assert!(parse_e("da-inv").is_err());
        assert!(parse_e("diag:").is_err());
    }

    #[test]
    fn exactly_one_source() {
        assert!(ProblemArgs::default().load().is_err());
        let both = ProblemArgs {
            example1: Some(vec![]),
            example2: Some(vec![]),
            ..Default::default()
        };
        assert!(both.load().is_err());
        let stray_rhs = ProblemArgs {
            example1: Some(vec![]),
            rhs: Some("b.txt".into()),
            ..Default::default()
        };
        assert!(stray_rhs.load().is_err());
    }

    #[test]
    fn generator_keys() {
        let p = ProblemArgs {
            example1: Some(kv(&["m=2", "mu=0"])),
            ..Default::default()
        }
        .load()
        .unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.a()[(0, 0)], 8.0);
        let bad = ProblemArgs {
            example1: Some(kv(&["n=2"])),
            ..Default::default()
        };
        assert!(bad.load().is_err());
        let frac = ProblemArgs {
            random: Some(kv(&["n=2.5"])),
            ..Default::default()
        };
        assert!(frac.load().is_err());
    }
}
