//! Output formats: JSON summaries, CSV tables and aligned text.
//!
//! CSV floats carry 17 significant digits and parse back to the same bits.

use std::io::{Read, Write};

use ave_core::io::{fmt17, fmt6};
use ave_core::{Algorithm, SolveReport, SolveStatus};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{config, Result};

fn sci<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt17(*v))
}

fn sci_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&fmt17(*x)),
        None => s.serialize_str(""),
    }
}

fn opt_float<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    let raw = String::deserialize(d)?;
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(serde::de::Error::custom)
}

/// JSON summary written by `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub algorithm: Algorithm,
    pub n: usize,
    pub lambda: f64,
    #[serde(rename = "E")]
    pub e: String,
    #[serde(rename = "IT")]
    pub iterations: usize,
    pub time_seconds: f64,
    pub final_res: f64,
    pub status: SolveStatus,
    /// False when `E = N_A⁻¹` is applied through a factorisation.
    pub e_diagonal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_minus_y: Option<f64>,
}

impl SolveSummary {
    pub fn new(r: &SolveReport, n: usize, lambda: f64, e: &str) -> Self {
        Self {
            algorithm: r.algorithm,
            n,
            lambda,
            e: e.to_string(),
            iterations: r.iterations,
            time_seconds: r.elapsed_seconds,
            final_res: r.final_residual(),
            status: r.status,
            e_diagonal: r.e_diagonal,
            x_minus_y: r.x_minus_y,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct HistoryRow {
    k: usize,
    #[serde(rename = "RES", serialize_with = "sci")]
    res: f64,
}

/// `k,RES` rows, one per iterate starting at `k = 0`.
pub fn write_history_csv(w: impl Write, history: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (k, &res) in history.iter().enumerate() {
        out.serialize(HistoryRow { k, res })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_history_csv(r: impl Read) -> Result<Vec<f64>> {
    let mut rows = Vec::new();
    for (i, rec) in csv::Reader::from_reader(r).deserialize::<HistoryRow>().enumerate() {
        let row = rec?;
        if row.k != i {
            return Err(config(format!("history row {i} has k = {}", row.k)));
        }
        rows.push(row.res);
    }
    Ok(rows)
}

/// One `(λ, algorithm)` run of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(serialize_with = "sci")]
    pub lambda: f64,
    pub algorithm: Algorithm,
    #[serde(rename = "IT")]
    pub iterations: usize,
    /// Missing when the scheme could not be set up.
    #[serde(serialize_with = "sci_opt", deserialize_with = "opt_float")]
    pub final_res: Option<f64>,
    pub status: SolveStatus,
    #[serde(serialize_with = "sci_opt", deserialize_with = "opt_float")]
    pub g_value: Option<f64>,
}

pub fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.algorithm.cmp(&b.algorithm)));
}

pub fn write_sweep_csv(w: impl Write, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sweep_csv(r: impl Read) -> Result<Vec<SweepRow>> {
    Ok(csv::Reader::from_reader(r)
        .deserialize()
        .collect::<std::result::Result<_, _>>()?)
}

/// IT, time and residual of the four schemes on the fixed benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub iterations: [usize; 4],
    pub seconds: [f64; 4],
    pub residuals: [f64; 4],
    pub statuses: [SolveStatus; 4],
}

const TABLE_HEADER: [&str; 5] = ["metric", "Alg1", "Alg2", "Alg3", "Alg4"];

impl Table1 {
    pub fn all_converged(&self) -> bool {
        self.statuses.iter().all(|s| *s == SolveStatus::Converged)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(TABLE_HEADER)?;
        let row = |name: &str, cells: Vec<String>| {
            let mut r = vec![name.to_string()];
            r.extend(cells);
            r
        };
        out.write_record(row("IT", self.iterations.iter().map(|v| v.to_string()).collect()))?;
        out.write_record(row("Time", self.seconds.iter().map(|v| fmt17(*v)).collect()))?;
        out.write_record(row("RES", self.residuals.iter().map(|v| fmt17(*v)).collect()))?;
        out.write_record(row("status", self.statuses.iter().map(|v| v.to_string()).collect()))?;
        out.flush()?;
        Ok(())
    }

    pub fn read_csv(r: impl Read) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
        let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;
        let cells = |name: &str| -> Result<Vec<String>> {
            let rec = records
                .iter()
                .find(|r| r.get(0) == Some(name))
                .ok_or_else(|| config(format!("table is missing the {name} row")))?;
            if rec.len() != 5 {
                return Err(config(format!("{name} row needs 4 values")));
            }
            Ok(rec.iter().skip(1).map(str::to_string).collect())
        };
        fn four<T: std::str::FromStr>(v: Vec<String>, name: &str) -> Result<[T; 4]> {
            let parsed: Vec<T> = v
                .iter()
                .map(|s| s.parse().map_err(|_| config(format!("bad {name} cell '{s}'"))))
                .collect::<Result<_>>()?;
            parsed
                .try_into()
                .map_err(|_| config(format!("{name} row needs 4 values")))
        }
        if records.first().map(|r| r.iter().collect::<Vec<_>>()) != Some(TABLE_HEADER.to_vec()) {
            return Err(config("table header must be metric,Alg1,Alg2,Alg3,Alg4"));
        }
        Ok(Self {
            iterations: four(cells("IT")?, "IT")?,
            seconds: four(cells("Time")?, "Time")?,
            residuals: four(cells("RES")?, "RES")?,
            statuses: four(cells("status")?, "status")?,
        })
    }

    /// Aligned text with 6 significant digits.
    pub fn render_text(&self) -> String {
        let mut rows = vec![TABLE_HEADER.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
        rows.push(
            std::iter::once("IT".to_string())
                .chain(self.iterations.iter().map(|v| v.to_string()))
                .collect(),
        );
        rows.push(
            std::iter::once("Time".to_string())
                .chain(self.seconds.iter().map(|v| fmt6(*v)))
                .collect(),
        );
        rows.push(
            std::iter::once("RES".to_string())
                .chain(self.residuals.iter().map(|v| fmt6(*v)))
                .collect(),
        );
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for row in rows {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(lambda: f64, alg: Algorithm) -> SweepRow {
        SweepRow {
            lambda,
            algorithm: alg,
            iterations: 3,
            final_res: Some(0.1),
            status: SolveStatus::Converged,
            g_value: None,
        }
    }

    #[test]
    fn sweep_header_and_empty_cells() {
        let mut buf = Vec::new();
        let mut r = row(0.5, Algorithm::Alg3);
        r.final_res = None;
        r.status = SolveStatus::Breakdown;
        write_sweep_csv(&mut buf, &[r.clone()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "lambda,algorithm,IT,final_res,status,g_value\n5.0000000000000000e-1,3,3,,Breakdown,\n"
        );
        assert_eq!(read_sweep_csv(text.as_bytes()).unwrap(), vec![r]);
    }

    #[test]
    fn rows_sort_by_lambda_then_algorithm() {
        let mut rows = vec![
            row(1.0, Algorithm::Alg4),
            row(0.5, Algorithm::Alg4),
            row(1.0, Algorithm::Alg3),
        ];
        sort_rows(&mut rows);
        let keys: Vec<(f64, u8)> = rows.iter().map(|r| (r.lambda, r.algorithm.number())).collect();
        assert_eq!(keys, vec![(0.5, 4), (1.0, 3), (1.0, 4)]);
    }

    #[test]
    fn history_rejects_gaps() {
        assert!(read_history_csv("k,RES\n0,1.0\n2,0.5\n".as_bytes()).is_err());
        assert_eq!(read_history_csv("k,RES\n0,1.0\n1,0.5\n".as_bytes()).unwrap(), vec![1.0, 0.5]);
    }

    #[test]
    fn table_text_uses_six_digits() {
        let t = Table1 {
            iterations: [26, 23, 23, 29],
            seconds: [0.0123456789, 0.5, 1.0, 2.0],
            residuals: [8.3447e-7, 6.5155e-7, 6.3796e-7, 7.0597e-7],
            statuses: [SolveStatus::Converged; 4],
        };
        let text = t.render_text();
        assert!(text.contains("1.23457e-2"));
        assert!(text.lines().nth(1).unwrap().ends_with("29"));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(Table1::read_csv(buf.as_slice()).unwrap(), t);
        assert!(Table1::read_csv("metric,A\n".as_bytes()).is_err());
    }
}
