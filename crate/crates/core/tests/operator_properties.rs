use mgl_lane_emden::laguerre::{eval_mgl, BasisParams};
use mgl_lane_emden::operators::{cardinal_values, eval_hat_interpolant, DiffOperators};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn ops(n: usize, alpha: f64, map_l: f64) -> DiffOperators {
    DiffOperators::new(&BasisParams::new(n, alpha, map_l).unwrap()).unwrap()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_deriv(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Rows of `d·f` compared against `expected`, each relative to `Σⱼ |dᵢⱼ fⱼ|`.
fn assert_rows(d: &DMatrix<f64>, f: &[f64], expected: &[f64], rtol: f64, label: &str) {
    for i in 0..f.len() {
        let (mut value, mut scale) = (0.0, 0.0);
        for j in 0..f.len() {
            value += d[(i, j)] * f[j];
            scale += (d[(i, j)] * f[j]).abs();
        }
        let scale = scale.max(expected[i].abs()).max(f64::MIN_POSITIVE);
        assert!(
            (value - expected[i]).abs() <= rtol * scale,
            "{label} row {i}: {value} vs {}",
            expected[i]
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weighted_polynomials_are_differentiated_exactly(
        n in 1usize..=12,
        alpha in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]),
        raw in prop::collection::vec(-1.0f64..1.0, 13),
    ) {
        let d = ops(n, alpha, 1.0);
        let q = &raw[..=n];
        let dq = poly_deriv(q);
        let ddq = poly_deriv(&dq);
        let eta = &d.nodes.eta;
        let w = |x: f64| (-x / 2.0).exp();

        let f: Vec<f64> = eta.iter().map(|&x| w(x) * horner(q, x)).collect();
        let f1: Vec<f64> = eta.iter().map(|&x| w(x) * (horner(&dq, x) - 0.5 * horner(q, x))).collect();
        let f2: Vec<f64> = eta
            .iter()
            .map(|&x| w(x) * (horner(&ddq, x) - horner(&dq, x) + 0.25 * horner(q, x)))
            .collect();
        assert_rows(&d.d1_mgl, &f, &f1, 1e-8, "d1_mgl");
        assert_rows(&d.d2_mgl, &f, &f2, 1e-7, "d2_mgl");

        let p: Vec<f64> = eta.iter().map(|&x| horner(q, x)).collect();
        let p1: Vec<f64> = eta.iter().map(|&x| horner(&dq, x)).collect();
        let p2: Vec<f64> = eta.iter().map(|&x| horner(&ddq, x)).collect();
        assert_rows(&d.d1_poly, &p, &p1, 1e-8, "d1_poly");
        assert_rows(&d.d2_poly, &p, &p2, 1e-7, "d2_poly");
    }

    #[test]
    fn cardinal_functions_are_kronecker_at_nodes(n in 1usize..=20, map_l in 0.25f64..8.0) {
        let d = ops(n, 1.0, map_l);
        for (i, &x) in d.mapped_nodes.iter().enumerate() {
            let row = cardinal_values(&d, x).unwrap();
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((v - expected).abs() <= 1e-12, "i={i} j={j}: {v}");
            }
        }
    }

    #[test]
    fn scaling_is_covariant(n in 1usize..=15, map_l in 0.1f64..10.0) {
        let unit = ops(n, 1.0, 1.0);
        let scaled = ops(n, 1.0, map_l);
        for i in 0..=n {
            prop_assert!((scaled.mapped_nodes[i] - map_l * unit.mapped_nodes[i]).abs() <= 1e-12 * scaled.mapped_nodes[i].max(1.0));
            for j in 0..=n {
                let d1 = unit.d1_mgl[(i, j)] / map_l;
                let d2 = unit.d2_mgl[(i, j)] / (map_l * map_l);
                prop_assert!((scaled.d1_scaled[(i, j)] - d1).abs() <= 1e-10 * d1.abs().max(1.0));
                prop_assert!((scaled.d2_scaled[(i, j)] - d2).abs() <= 1e-10 * d2.abs().max(1.0));
            }
        }
    }
}

#[test]
fn first_derivative_matrix_matches_finite_differences_of_cardinals() {
    for n in [1, 2, 5, 8, 12] {
        let d = ops(n, 1.0, 1.0);
        let size = d.size();
        let h = 1e-3;
        let at = |x: f64| cardinal_values(&d, x).unwrap();
        for i in 0..size {
            let x = d.mapped_nodes[i];
            let fd: Vec<f64> = if i == 0 {
                let f: Vec<Vec<f64>> = (0..5).map(|k| at(k as f64 * h)).collect();
                (0..size)
                    .map(|j| {
                        (-25.0 * f[0][j] + 48.0 * f[1][j] - 36.0 * f[2][j] + 16.0 * f[3][j]
                            - 3.0 * f[4][j])
                            / (12.0 * h)
                    })
                    .collect()
            } else {
                let (p2, p1, m1, m2) = (at(x + 2.0 * h), at(x + h), at(x - h), at(x - 2.0 * h));
                (0..size)
                    .map(|j| (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * h))
                    .collect()
            };
            for j in 0..size {
                let exact = d.d1_mgl[(i, j)];
                assert!(
                    (fd[j] - exact).abs() <= 1e-5 * exact.abs().max(1.0),
                    "n={n} i={i} j={j}: {} vs {exact}",
                    fd[j]
                );
            }
        }
    }
}

#[test]
fn second_derivative_is_square_of_first_for_small_degree() {
    for n in 1..=10 {
        for alpha in [0.0, 1.0, 2.5] {
            let d = ops(n, alpha, 1.0);
            let squared = &d.d1_mgl * &d.d1_mgl;
            let diff = (&squared - &d.d2_mgl).abs().max();
            assert!(
                diff <= 1e-8 * d.d2_mgl.abs().max().max(1.0),
                "n={n} α={alpha}: {diff}"
            );
            let squared = &d.d1_poly * &d.d1_poly;
            let diff = (&squared - &d.d2_poly).abs().max();
            assert!(
                diff <= 1e-8 * d.d2_poly.abs().max().max(1.0),
                "n={n} α={alpha}: {diff}"
            );
        }
    }
}

#[test]
fn interpolant_reproduces_highest_basis_function() {
    for &map_l in &[0.5, 1.0, 3.0] {
        let params = BasisParams::new(9, 1.0, map_l).unwrap();
        let d = DiffOperators::new(&params).unwrap();
        let samples: Vec<f64> = d
            .mapped_nodes
            .iter()
            .map(|&x| eval_mgl(&params, 9, x).unwrap())
            .collect();
        for k in 0..80 {
            let x = 0.173 * k as f64 * map_l;
            let value = eval_hat_interpolant(&d, &samples, x).unwrap();
            let expected = eval_mgl(&params, 9, x).unwrap();
            assert!(
                (value - expected).abs() <= 1e-9,
                "L={map_l} x={x}: {value} vs {expected}"
            );
        }
    }
}

#[test]
fn interpolant_near_a_node_is_continuous() {
    let d = ops(6, 1.0, 1.0);
    let coeffs: Vec<f64> = (0..7).map(|j| 1.0 / (1.0 + j as f64)).collect();
    for i in 1..7 {
        let x = d.mapped_nodes[i];
        let at = eval_hat_interpolant(&d, &coeffs, x).unwrap();
        for gap in [1e-12, 1e-10, 1e-8, 1e-7] {
            let near = eval_hat_interpolant(&d, &coeffs, x + gap).unwrap();
            assert!(
                (near - at).abs() <= 1e-6,
                "node {i} gap {gap}: {near} vs {at}"
            );
        }
    }
}
