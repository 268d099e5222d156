use ave_cli::commands::sweep_rows;
use ave_cli::args::IterationArgs;
use ave_cli::report::{read_history_csv, read_sweep_csv, write_history_csv, write_sweep_csv, SweepRow, Table1};
use ave_core::problems::{gen_random};
use ave_core::{solve, Algorithm, EMatrixSpec, SolveStatus, SolverConfig};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn status() -> impl Strategy<Value = SolveStatus> {
    prop::sample::select(vec![SolveStatus::Converged, SolveStatus::MaxIterations, SolveStatus::Breakdown])
}

fn sweep_row() -> impl Strategy<Value = SweepRow> {
    (
        finite(),
        prop::sample::select(Algorithm::ALL.to_vec()),
        0usize..10_000,
        prop::option::of(finite()),
        status(),
        prop::option::of(finite()),
    )
        .prop_map(|(lambda, algorithm, iterations, final_res, status, g_value)| SweepRow {
            lambda,
            algorithm,
            iterations,
            final_res,
            status,
            g_value,
        })
}

proptest! {
    #[test]
    fn history_round_trips(values in prop::collection::vec(finite(), 1..50)) {
        let mut buf = Vec::new();
        write_history_csv(&mut buf, &values).unwrap();
        let back = read_history_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), values.len());
        for (a, b) in back.iter().zip(&values) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn sweep_rows_round_trip(rows in prop::collection::vec(sweep_row(), 0..20)) {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        prop_assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn table_round_trips(its in prop::array::uniform4(0usize..1000), secs in prop::array::uniform4(finite()),
                         res in prop::array::uniform4(finite()), st in prop::array::uniform4(status())) {
        let t = Table1 { iterations: its, seconds: secs, residuals: res, statuses: st };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        prop_assert_eq!(Table1::read_csv(buf.as_slice()).unwrap(), t);
    }
}

#[test]
fn solver_history_survives_csv() {
    let p = gen_random(7, 3, 1.0).unwrap();
    for alg in Algorithm::ALL {
        let r = solve(&p, &SolverConfig::new(alg, 0.8, EMatrixSpec::InvDiagA)).unwrap();
        let mut buf = Vec::new();
        write_history_csv(&mut buf, &r.residual_history).unwrap();
        assert_eq!(read_history_csv(buf.as_slice()).unwrap(), r.residual_history);
    }
}

#[test]
fn sweep_output_survives_csv() {
    let p = gen_random(5, 8, 0.5).unwrap();
    let it = IterationArgs {
        tol: 1e-8,
        kmax: 200,
        absolute_residual: false,
    };
    let grid: Vec<f64> = (1..10).map(|i| i as f64 * 0.2).collect();
    let rows = sweep_rows(&p, &Algorithm::ALL, &grid, &EMatrixSpec::InvDiagA, &it, Some(0)).unwrap();
    assert_eq!(rows.len(), 36);
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).unwrap();
    assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), rows);
    let threaded = sweep_rows(&p, &Algorithm::ALL, &grid, &EMatrixSpec::InvDiagA, &it, Some(3)).unwrap();
    assert_eq!(threaded, rows);
}
