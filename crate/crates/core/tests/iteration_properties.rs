use ave_core::conditions::{
    check_t12, check_t31, check_t32, LowerTriangularObjective, PredictorObjective,
};
use ave_core::linalg::DenseMatrix;
use ave_core::problems::{gen_example2, gen_random, Example2Params};
use ave_core::solvers::{
    residual, solve, Algorithm, AveProblem, EMatrixSpec, SolveReport, SolveStatus, SolverConfig,
};
use ave_core::Vector;
use proptest::prelude::*;

fn algorithm() -> impl Strategy<Value = Algorithm> {
    prop::sample::select(Algorithm::ALL.to_vec())
}

fn instance() -> impl Strategy<Value = AveProblem> {
    (1usize..=7, any::<u64>(), 0.5f64..4.0).prop_map(|(n, seed, dom)| gen_random(n, seed, dom).unwrap())
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn without_clock(mut r: SolveReport) -> SolveReport {
    r.elapsed_seconds = 0.0;
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn converged_start_reports_zero_iterations(p in instance(), alg in algorithm()) {
        let x_star = p.x_star().unwrap().clone();
        prop_assume!(residual(&p, &x_star).unwrap() <= 1e-6);
        let mut c = SolverConfig::new(alg, 0.8, EMatrixSpec::InvDiagA);
        c.x0 = Some(x_star.clone());
        let r = solve(&p, &c).unwrap();
        prop_assert_eq!(r.iterations, 0);
        prop_assert_eq!(r.status, SolveStatus::Converged);
        prop_assert_eq!(&r.final_x, &x_star);
    }

    #[test]
    fn solution_is_a_fixed_point(p in instance(), alg in algorithm(), lambda in 0.1f64..1.9) {
        let x_star = p.x_star().unwrap().clone();
        let mut c = SolverConfig::new(alg, lambda, EMatrixSpec::InvDiagA);
        c.x0 = Some(x_star.clone());
        c.tol = f64::MIN_POSITIVE;
        c.k_max = 1;
        let r = solve(&p, &c).unwrap();
        let bound = 1e-10 * (1.0 + x_star.norm2());
        prop_assert!(max_gap(&r.final_x, &x_star) <= bound);
    }

    #[test]
    fn history_matches_recorded_iterates(p in instance(), alg in algorithm()) {
        let mut c = SolverConfig::new(alg, 1.0, EMatrixSpec::InvDiagA);
        c.record_iterates = true;
        c.k_max = 40;
        let r = solve(&p, &c).unwrap();
        let iterates = r.iterates.as_ref().unwrap();
        prop_assert_eq!(iterates.len(), r.iterations + 1);
        prop_assert_eq!(r.residual_history.len(), r.iterations + 1);
        for (x, h) in iterates.iter().zip(&r.residual_history) {
            prop_assert!((residual(&p, x).unwrap() - h).abs() <= 1e-14);
        }
        prop_assert_eq!(iterates.last().unwrap(), &r.final_x);
    }

    #[test]
    fn predictor_solves_linear_system(p in instance(), use_alg4 in any::<bool>(), lambda in 0.2f64..1.5) {
        let alg = if use_alg4 { Algorithm::Alg4 } else { Algorithm::Alg3 };
        let mut c = SolverConfig::new(alg, lambda, EMatrixSpec::InvDiagA);
        c.record_iterates = true;
        c.k_max = 30;
        let r = solve(&p, &c).unwrap();
        let xs = r.iterates.unwrap();
        let ys = r.predictors.unwrap();
        prop_assert_eq!(ys.len(), r.iterations);
        let b = p.b();
        let bound = 1e-10 * (1.0 + b.norm2());
        for (x, y) in xs.iter().zip(&ys) {
            let ay = p.a().matvec(y);
            let gap: Vec<f64> = (0..y.dim()).map(|i| ay[i] - (x[i].abs() + b[i])).collect();
            prop_assert!(norm2(&gap) <= bound);
        }
    }

    #[test]
    fn runs_are_deterministic(p in instance(), alg in algorithm(), lambda in 0.1f64..1.9) {
        let mut c = SolverConfig::new(alg, lambda, EMatrixSpec::InvDiagA);
        c.record_iterates = true;
        c.k_max = 60;
        let first = without_clock(solve(&p, &c).unwrap());
        let second = without_clock(solve(&p, &c).unwrap());
        prop_assert_eq!(first, second);
    }

    #[test]
    fn algorithms_agree_when_converged(p in instance()) {
        let tol = 1e-10;
        let finals: Vec<Vector> = Algorithm::ALL
            .iter()
            .filter_map(|&alg| {
                let mut c = SolverConfig::new(alg, 1.0, EMatrixSpec::InvDiagA);
                c.tol = tol;
                let r = solve(&p, &c).unwrap();
                (r.status == SolveStatus::Converged).then_some(r.final_x)
            })
            .collect();
        prop_assume!(finals.len() == 4);
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assert!(max_gap(&finals[i], &finals[j]) <= 10.0 * tol);
            }
        }
    }

    #[test]
    fn t31_equals_radius_of_w(p in instance(), lambda in 0.05f64..2.0) {
        let r = check_t31(p.a(), lambda, &EMatrixSpec::InvDiagA).unwrap();
        let w = r.w.unwrap();
        prop_assert!((w.spectral_radius() - r.value.unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn t31_invariant_under_e_rescaling(p in instance(), lambda in 0.05f64..2.0, c in 0.1f64..10.0) {
        let d = p.a().diagonal();
        let e: Vec<f64> = d.iter().map(|v| 1.0 / v).collect();
        let scaled: Vec<f64> = e.iter().map(|v| c * v).collect();
        let base = check_t31(p.a(), lambda, &EMatrixSpec::ExplicitDiagonal(e)).unwrap().value.unwrap();
        let moved = check_t31(p.a(), lambda / c, &EMatrixSpec::ExplicitDiagonal(scaled)).unwrap().value.unwrap();
        prop_assert!((base - moved).abs() <= 1e-12 * base.max(1.0), "{base} vs {moved}");
    }

    #[test]
    fn scalar_t32_implies_t12(a in 0.5f64..5.0, lambda in 1e-6f64..=1.0, e in 1e-6f64..=1.0) {
        let a = DenseMatrix::from_rows(&[vec![a]]).unwrap();
        let spec = EMatrixSpec::ExplicitDiagonal(vec![e]);
        if check_t32(&a, lambda, &spec).unwrap().holds {
            prop_assert!(check_t12(&a, lambda, &spec).unwrap().holds);
        }
    }

    #[test]
    fn predictor_objective_is_piecewise_linear(p in instance(), lo in 0.05f64..0.5, h in 0.01f64..0.1) {
        let g = PredictorObjective::new(p.a()).unwrap();
        for start in [lo, 1.0 + lo] {
            let end = if start < 1.0 { 1.0 } else { 3.0 };
            let mut l = start;
            while l + 2.0 * h <= end {
                let second = g.eval(l + 2.0 * h) - 2.0 * g.eval(l + h) + g.eval(l);
                prop_assert!(second.abs() <= 1e-9, "second difference {second}");
                l += h;
            }
        }
    }

    #[test]
    fn t31_below_one_gives_decreasing_objective(p in instance(), lambda in 0.05f64..=1.0) {
        if check_t31(p.a(), lambda, &EMatrixSpec::InvNA).unwrap().holds {
            let g = PredictorObjective::new(p.a()).unwrap();
            let (mu1, mu2) = g.slopes();
            prop_assert!(mu1 < 0.0);
            prop_assert!(mu2 > 1.0 && mu2 < 2.0);
            prop_assert!(g.eval(lambda * 0.5) > g.eval(lambda));
        }
    }

    #[test]
    fn lower_triangular_objective_slope(m in 1usize..5, theta in 2.5f64..8.0, lambda in 1.0f64..3.0) {
        let p = gen_example2(Example2Params { m, theta }).unwrap();
        let g = LowerTriangularObjective::new(p.a()).unwrap();
        let h = 1e-4;
        let fd = (g.eval(lambda + h) - g.eval(lambda)) / h;
        let (_, alpha2) = g.slopes();
        prop_assert!(alpha2 > 0.0);
        prop_assert!((fd - alpha2).abs() <= 1e-8 * alpha2.max(1.0), "{fd} vs {alpha2}");
    }
}

/// Eigenvalues of the tridiagonal Toeplitz pencil `J − τG` for
/// `A = tridiag(−3, 9, −3)`, `λ = 0.9`, `E = D⁻¹`: with `c = cos(kπ/(n+1))`,
/// each `τ` is a root of `τ² + (0.8c² − 0.4)τ + (0.04 − 0.44c²)`.
fn pencil_radius(n: usize) -> f64 {
    (1..=n)
        .flat_map(|k| {
            let c = (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let (p, q) = (0.8 * c * c - 0.4, 0.04 - 0.44 * c * c);
            let disc = (p * p - 4.0 * q).sqrt();
            [((-p + disc) / 2.0).abs(), ((-p - disc) / 2.0).abs()]
        })
        .fold(0.0, f64::max)
}

#[test]
fn t12_matches_closed_form_on_toeplitz_family() {
    for n in [1, 2, 3, 5, 8, 12] {
        let a = DenseMatrix::tridiagonal(n, -3.0, 9.0, -3.0);
        let got = check_t12(&a, 0.9, &EMatrixSpec::InvDiagA).unwrap().value.unwrap();
        let want = pencil_radius(n);
        assert!((got - want).abs() <= 1e-8, "n={n}: {got} vs {want}");
    }
    assert!((pencil_radius(10_000) - (0.4 + 1.76f64.sqrt()) / 2.0).abs() < 1e-6);
}

#[test]
fn lower_triangular_objective_minimised_at_one() {
    let p = gen_example2(Example2Params { m: 4, theta: 4.0 }).unwrap();
    let g = LowerTriangularObjective::new(p.a()).unwrap();
    let (alpha1, alpha2) = g.slopes();
    assert!(alpha1 < 0.0 && alpha2 > 0.0);
    for l in [0.5, 0.9, 1.1, 1.5] {
        assert!(g.eval(l) > g.eval(1.0));
    }
}
