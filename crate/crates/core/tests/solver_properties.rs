use mgl_lane_emden::laguerre::{radau_nodes, BasisParams};
use mgl_lane_emden::operators::{
    build_poly_d1, build_poly_d2, eval_hat_interpolant, DiffOperators,
};
use mgl_lane_emden::solver::{
    assemble_jacobian, assemble_residual, newton_solve, pow_signed, LaneEmdenProblem, SolverConfig,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

const CONVERGING: [(f64, usize, f64); 7] = [
    (0.0, 12, 1.0),
    (1.0, 12, 1.0),
    (1.5, 8, 1.0),
    (2.0, 6, 0.5),
    (3.0, 7, 1.0),
    (4.0, 6, 2.0),
    (5.0, 12, 1.0),
];

fn problem(m: f64) -> LaneEmdenProblem {
    LaneEmdenProblem::new(m).unwrap()
}

fn ops_for(config: &SolverConfig) -> DiffOperators {
    DiffOperators::new(&config.basis_params().unwrap()).unwrap()
}

/// Scaled MGL matrices and nodes rebuilt from the polynomial matrices.
fn rebuilt_operators(n: usize, alpha: f64, map_l: f64) -> (DMatrix<f64>, DMatrix<f64>, Vec<f64>) {
    let nodes = radau_nodes(&BasisParams::new(n, alpha, map_l).unwrap()).unwrap();
    let (d1, d2) = (build_poly_d1(&nodes, alpha), build_poly_d2(&nodes, alpha));
    let eta = &nodes.eta;
    let size = eta.len();
    let ratio = |i: usize, j: usize| ((eta[j] - eta[i]) / 2.0).exp();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let h1 = DMatrix::from_fn(size, size, |i, j| {
        (d1[(i, j)] - 0.5 * delta(i, j)) * ratio(i, j) / map_l
    });
    let h2 = DMatrix::from_fn(size, size, |i, j| {
        (d2[(i, j)] - d1[(i, j)] + 0.25 * delta(i, j)) * ratio(i, j) / (map_l * map_l)
    });
    (h1, h2, eta.iter().map(|e| map_l * e).collect())
}

fn rebuilt_residual(m: f64, config: &SolverConfig, b: &[f64]) -> Vec<f64> {
    let (h1, h2, x) = rebuilt_operators(config.n, config.alpha, config.map_l);
    let dot = |mat: &DMatrix<f64>, i: usize| (0..b.len()).map(|j| mat[(i, j)] * b[j]).sum::<f64>();
    let mut r = vec![b[0] - 1.0, dot(&h1, 0)];
    for i in 1..config.n {
        r.push(x[i] * dot(&h2, i) + 2.0 * dot(&h1, i) + x[i] * pow_signed(b[i], m));
    }
    r
}

#[test]
fn converged_solutions_satisfy_an_independently_built_system() {
    for (m, n, map_l) in CONVERGING {
        let config = SolverConfig::new(n, map_l);
        let solution = newton_solve(&problem(m), &config).unwrap();
        assert!(solution.converged, "m={m} n={n} L={map_l}");
        assert_eq!(solution.b[0], 1.0);
        let residual = rebuilt_residual(m, &config, &solution.b);
        assert_eq!(residual.len(), n + 1);
        let worst = residual.iter().fold(0.0_f64, |a, r| a.max(r.abs()));
        assert!(worst <= 10.0 * config.newton_tol, "m={m}: {worst}");
    }
}

#[test]
fn jacobian_matches_forward_differences_at_converged_points() {
    for (m, n, map_l) in CONVERGING {
        let config = SolverConfig::new(n, map_l);
        let p = problem(m);
        let ops = ops_for(&config);
        let b = newton_solve(&p, &config).unwrap().b;
        let jac = assemble_jacobian(&p, &ops, &b);
        assert!(!jac.singular_nonlinear_term);
        let base = assemble_residual(&p, &ops, &b);
        for j in 0..b.len() {
            let h = 1e-7 * b[j].abs().max(1.0);
            let mut shifted = b.clone();
            shifted[j] += h;
            let moved = assemble_residual(&p, &ops, &shifted);
            for i in 0..b.len() {
                let fd = (moved[i] - base[i]) / h;
                let exact = jac.matrix[(i, j)];
                assert!(
                    (fd - exact).abs() <= 1e-5 * exact.abs().max(1.0),
                    "m={m} ({i},{j}): {fd} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn boundary_equations_hold_at_convergence() {
    for (m, n, map_l) in CONVERGING {
        let config = SolverConfig::new(n, map_l);
        let ops = ops_for(&config);
        let solution = newton_solve(&problem(m), &config).unwrap();
        assert_eq!(eval_hat_interpolant(&ops, &solution.b, 0.0).unwrap(), 1.0);
        let slope: f64 = (0..=n).map(|j| ops.d1_scaled[(0, j)] * solution.b[j]).sum();
        assert!(slope.abs() <= config.newton_tol, "m={m}: {slope}");
    }
}

#[test]
fn accepted_steps_strictly_reduce_the_residual() {
    for (m, n, map_l) in CONVERGING
        .iter()
        .copied()
        .chain([(2.0, 6, 1.0), (2.0, 10, 2.0)])
    {
        let solution = newton_solve(&problem(m), &SolverConfig::new(n, map_l)).unwrap();
        let history = &solution.residual_history;
        // one entry per accepted step after the initial residual; a failed line search adds none
        assert!(
            history.len() == solution.iterations + 1
                || (!solution.converged && history.len() == solution.iterations)
        );
        assert!(
            history.windows(2).all(|w| w[1] < w[0]),
            "m={m} L={map_l}: {history:?}"
        );
        assert_eq!(*history.last().unwrap(), solution.residual_norm);
    }
}

#[test]
fn linear_problems_take_one_newton_step() {
    for m in [0.0, 1.0] {
        let solution = newton_solve(&problem(m), &SolverConfig::new(12, 1.0)).unwrap();
        assert!(
            solution.converged && solution.iterations <= 2,
            "m={m}: {}",
            solution.iterations
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn residual_is_covariant_in_the_map_parameter(
        n in 2usize..=12,
        map_l in 0.2f64..6.0,
        m in prop::sample::select(vec![0.0, 1.0, 1.5, 3.0, 5.0]),
        raw in prop::collection::vec(-1.0f64..1.0, 13),
    ) {
        let config = SolverConfig::new(n, map_l);
        let b: Vec<f64> = raw[..=n].to_vec();
        let unit = ops_for(&SolverConfig::new(n, 1.0));
        let scaled = ops_for(&config);

        let dot = |mat: &DMatrix<f64>, i: usize| (0..=n).map(|j| mat[(i, j)] * b[j]).sum::<f64>();
        let mut expected = vec![b[0] - 1.0, dot(&unit.d1_mgl, 0) / map_l];
        for i in 1..n {
            let x = map_l * unit.mapped_nodes[i];
            expected.push(x * dot(&unit.d2_mgl, i) / (map_l * map_l) + 2.0 * dot(&unit.d1_mgl, i) / map_l + x * pow_signed(b[i], m));
        }
        let residual = assemble_residual(&problem(m), &scaled, &b);
        for (r, e) in residual.iter().zip(&expected) {
            prop_assert!((r - e).abs() <= 1e-10 * e.abs().max(1.0), "{r} vs {e}");
        }

        for k in 0..20 {
            let x = 0.37 * k as f64;
            let a = eval_hat_interpolant(&scaled, &b, map_l * x).unwrap();
            let c = eval_hat_interpolant(&unit, &b, x).unwrap();
            prop_assert!((a - c).abs() <= 1e-10 * c.abs().max(1.0), "x={x}: {a} vs {c}");
        }
    }

    #[test]
    fn pow_signed_is_odd_for_fractional_exponents(y in 0.0f64..4.0, m in 0.1f64..4.9) {
        prop_assume!(m.fract() != 0.0);
        prop_assert_eq!(pow_signed(-y, m), -pow_signed(y, m));
        prop_assert_eq!(pow_signed(y, m), y.powf(m));
    }
}

#[test]
fn invalid_requests_are_rejected() {
    assert!(LaneEmdenProblem::new(-1.0).is_err());
    assert!(newton_solve(&problem(3.0), &SolverConfig::new(0, 1.0)).is_err());
    assert!(newton_solve(&problem(3.0), &SolverConfig::new(31, 1.0)).is_err());
    assert!(newton_solve(&problem(3.0), &SolverConfig::new(7, 0.0)).is_err());
    assert!(newton_solve(&problem(3.0), &SolverConfig::new(7, 1.0).with_alpha(-1.5)).is_err());
}
