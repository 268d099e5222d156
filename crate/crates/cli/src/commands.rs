use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ave_core::conditions::{check_all, LowerTriangularObjective, PredictorObjective};
use ave_core::io::{read_vector, save_problem, write_vector};
use ave_core::problems::{gen_example1, sign_enum_oracle, Example1Params};
use ave_core::solvers::ResidualMode;
use ave_core::{
    solve, Algorithm, AveError, AveProblem, EMatrixSpec, SolveStatus, SolverConfig,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    BenchArgs, CheckArgs, Command, GenerateArgs, IterationArgs, OracleArgs, SolveArgs, SweepArgs,
};
use crate::error::{config, CliError, Result};
use crate::report::{sort_rows, write_history_csv, write_sweep_csv, SolveSummary, SweepRow, Table1};
use crate::source::{parse_e, parse_grid};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_MAX_ITERATIONS: u8 = 2;
pub const EXIT_BREAKDOWN: u8 = 3;

/// Worker cap for sweeps; `0` runs serially.
pub const THREADS_ENV: &str = "AVE_ITER_THREADS";

pub fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::MaxIterations => EXIT_MAX_ITERATIONS,
        SolveStatus::Breakdown => EXIT_BREAKDOWN,
    }
}

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::BenchTable1(a) => cmd_bench_table1(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn solver_config(alg: Algorithm, lambda: f64, e: EMatrixSpec, it: &IterationArgs) -> SolverConfig {
    let mut c = SolverConfig::new(alg, lambda, e);
    c.tol = it.tol;
    c.k_max = it.kmax;
    if it.absolute_residual {
        c.residual = ResidualMode::Absolute;
    }
    c
}

fn write_json(target: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match target {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let p = args.problem.load()?;
    let e = parse_e(&args.e)?;
    let mut c = solver_config(args.alg, args.lambda, e, &args.iteration);
    if let Some(path) = &args.x0 {
        c.x0 = Some(read_vector(path)?);
    }
    let report = match solve(&p, &c) {
        Ok(r) => r,
        Err(AveError::Breakdown(why)) => {
            eprintln!("ave: breakdown: {why}");
            return Ok(EXIT_BREAKDOWN);
        }
        Err(err) => return Err(err.into()),
    };
    let summary = SolveSummary::new(&report, p.dim(), args.lambda, &args.e);
    write_json(None, &summary)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_json(Some(&dir.join("summary.json")), &summary)?;
        write_history_csv(BufWriter::new(File::create(dir.join("history.csv"))?), &report.residual_history)?;
        write_vector(dir.join("final_x.txt"), &report.final_x)?;
        if let Some(y) = &report.final_y {
            write_vector(dir.join("final_y.txt"), y)?;
        }
    }
    Ok(exit_code(report.status))
}

pub fn cmd_check(args: CheckArgs) -> Result<u8> {
    let a = args.problem.load_matrix()?;
    let e = parse_e(&args.e)?;
    if !(args.lambda.is_finite() && args.lambda > 0.0) {
        return Err(config(format!("--lambda must be positive, got {}", args.lambda)));
    }
    let reports = check_all(&a, args.lambda, &e);
    write_json(args.out.as_deref(), &reports)?;
    Ok(EXIT_OK)
}

fn objective(p: &AveProblem, alg: Algorithm) -> Option<Box<dyn Fn(f64) -> f64 + Sync>> {
    match alg {
        Algorithm::Alg3 => PredictorObjective::new(p.a()).ok().map(|g| Box::new(move |l| g.eval(l)) as _),
        Algorithm::Alg4 => LowerTriangularObjective::new(p.a())
            .ok()
            .map(|g| Box::new(move |l| g.eval(l)) as _),
        _ => None,
    }
}

fn sweep_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(_) => Err(config(format!("{THREADS_ENV} is not valid unicode"))),
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| config(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))),
    }
}

/// Runs every `(λ, algorithm)` pair; rows come back sorted.
pub fn sweep_rows(
    p: &AveProblem,
    algs: &[Algorithm],
    grid: &[f64],
    e: &EMatrixSpec,
    it: &IterationArgs,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let objectives: Vec<_> = algs.iter().map(|&a| objective(p, a)).collect();
    let jobs: Vec<(f64, usize)> = grid
        .iter()
        .flat_map(|&l| (0..algs.len()).map(move |i| (l, i)))
        .collect();
    let one = |&(lambda, i): &(f64, usize)| -> Result<SweepRow> {
        let alg = algs[i];
        let c = solver_config(alg, lambda, e.clone(), it);
        let g_value = objectives[i].as_ref().map(|g| g(lambda));
        match solve(p, &c) {
            Ok(r) => Ok(SweepRow {
                lambda,
                algorithm: alg,
                iterations: r.iterations,
                final_res: Some(r.final_residual()),
                status: r.status,
                g_value,
            }),
            Err(AveError::Breakdown(why)) => {
                eprintln!("ave: lambda={lambda} alg{alg}: breakdown: {why}");
                Ok(SweepRow {
                    lambda,
                    algorithm: alg,
                    iterations: 0,
                    final_res: None,
                    status: SolveStatus::Breakdown,
                    g_value,
                })
            }
            Err(err) => Err(err.into()),
        }
    };
    let mut rows: Vec<SweepRow> = match threads {
        Some(0) => jobs.iter().map(one).collect::<Result<_>>()?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| config(format!("thread pool: {e}")))?
            .install(|| jobs.par_iter().map(one).collect::<Result<_>>())?,
        None => jobs.par_iter().map(one).collect::<Result<_>>()?,
    };
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn cmd_sweep(args: SweepArgs) -> Result<u8> {
    let grid = parse_grid(&args.grid)?;
    let p = args.problem.load()?;
    let e = parse_e(&args.e)?;
    let mut algs = args.alg.clone();
    algs.sort();
    algs.dedup();
    let rows = sweep_rows(&p, &algs, &grid, &e, &args.iteration, sweep_threads()?)?;
    match &args.out {
        Some(path) => write_sweep_csv(BufWriter::new(File::create(path)?), &rows)?,
        None => write_sweep_csv(io::stdout().lock(), &rows)?,
    }
    Ok(EXIT_OK)
}

/// The fixed comparison: n = 400, μ = 4, λ = 0.5, `E = D_A⁻¹`, zero start.
pub fn table1() -> Result<Table1> {
    let p = gen_example1(Example1Params { m: 20, mu: 4.0 })?;
    let mut t = Table1 {
        iterations: [0; 4],
        seconds: [0.0; 4],
        residuals: [0.0; 4],
        statuses: [SolveStatus::MaxIterations; 4],
    };
    for (i, alg) in Algorithm::ALL.into_iter().enumerate() {
        let r = solve(&p, &SolverConfig::new(alg, 0.5, EMatrixSpec::InvDiagA))?;
        t.iterations[i] = r.iterations;
        t.seconds[i] = r.elapsed_seconds;
        t.residuals[i] = r.final_residual();
        t.statuses[i] = r.status;
    }
    Ok(t)
}

pub fn cmd_bench_table1(args: BenchArgs) -> Result<u8> {
    let t = table1()?;
    let text = t.render_text();
    print!("{text}");
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        t.write_csv(BufWriter::new(File::create(dir.join("table1.csv"))?))?;
        fs::write(dir.join("table1.txt"), &text)?;
    }
    Ok(if t.all_converged() { EXIT_OK } else { EXIT_BREAKDOWN })
}

#[derive(Serialize)]
struct OracleOutput {
    n: usize,
    solutions: Vec<Vec<f64>>,
}

pub fn cmd_oracle(args: OracleArgs) -> Result<u8> {
    let p = args.problem.load()?;
    let solutions = sign_enum_oracle(&p)?.into_iter().map(|v| v.into_inner()).collect();
    write_json(args.out.as_deref(), &OracleOutput { n: p.dim(), solutions })?;
    Ok(EXIT_OK)
}

pub fn cmd_generate(args: GenerateArgs) -> Result<u8> {
    let p = args.problem.load()?;
    save_problem(&args.out, &p)?;
    Ok(EXIT_OK)
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_ERROR
    }
}
