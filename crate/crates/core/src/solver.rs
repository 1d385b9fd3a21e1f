//! Collocation of the Lane-Emden equation
//!
//! ```text
//! x·y″ + 2·y′ + x·yᵐ = 0,   y(0) = 1,   y′(0) = 0
//! ```
//!
//! on the mapped MGL nodes `ℑᵢ`, solved with a damped Newton iteration.
//!
//! Unknowns are the nodal values `bⱼ = I_n y(ℑⱼ)`. Equations, in row order:
//! `b₀ − 1`, `Σⱼ d̂_L,0j·bⱼ`, and the differential equation at `ℑ₁ … ℑₙ₋₁`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laguerre::BasisParams;
use crate::operators::DiffOperators;

/// `y″ + (2/x)·y′ + yᵐ = 0`; the physically interesting range is `0 ≤ m ≤ 5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaneEmdenProblem {
    pub m: f64,
}

impl LaneEmdenProblem {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "polytropic index m = {m} must be ≥ 0"
            )));
        }
        Ok(LaneEmdenProblem { m })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n: usize,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub map_l: f64,
    /// Threshold on the ∞-norm of the residual.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Smallest step factor tried by the halving line search.
    pub min_step: f64,
}

impl SolverConfig {
    /// `α = 1`, tolerance `1e-12`, 100 iterations, step factors down to 1/64.
    pub fn new(n: usize, map_l: f64) -> Self {
        SolverConfig {
            n,
            alpha: 1.0,
            map_l,
            newton_tol: 1e-12,
            max_iter: 100,
            min_step: 1.0 / 64.0,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_tol(mut self, newton_tol: f64) -> Self {
        self.newton_tol = newton_tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn basis_params(&self) -> Result<BasisParams> {
        BasisParams::new(self.n, self.alpha, self.map_l)
    }

    pub fn validate(&self) -> Result<()> {
        self.basis_params()?;
        if !(self.newton_tol > 0.0) {
            return Err(Error::InvalidParameter("newton_tol must be > 0".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidParameter("max_iter must be ≥ 1".into()));
        }
        if !(self.min_step > 0.0 && self.min_step <= 1.0) {
            return Err(Error::InvalidParameter(
                "min_step must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    /// Nodal values `bⱼ = I_n y(ℑⱼ)`.
    pub b: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub config: SolverConfig,
    pub mapped_nodes: Vec<f64>,
    /// Accepted residual ∞-norms, starting with the initial guess.
    pub residual_history: Vec<f64>,
    /// Set when `∂(yᵐ)/∂y` was singular (`y = 0`, `m < 1`) at some iterate.
    pub singular_nonlinear_term: bool,
}

/// `yᵐ` extended to `y < 0`: plain power for integer `m`, `sign(y)·|y|ᵐ`
/// otherwise.
pub fn pow_signed(y: f64, m: f64) -> f64 {
    match integer_exponent(m) {
        Some(k) => y.powi(k),
        None => y.signum() * y.abs().powf(m),
    }
}

/// Derivative of [`pow_signed`] with respect to `y`. Infinite at `y = 0` for
/// non-integer `0 < m < 1`.
pub fn pow_signed_deriv(y: f64, m: f64) -> f64 {
    match integer_exponent(m) {
        Some(0) => 0.0,
        Some(k) => m * y.powi(k - 1),
        None => m * y.abs().powf(m - 1.0),
    }
}

fn integer_exponent(m: f64) -> Option<i32> {
    (m.fract() == 0.0 && m.abs() <= i32::MAX as f64).then_some(m as i32)
}

/// Residual of the collocation system for a general source term `g(y)`.
pub(crate) fn assemble_residual_with(
    g: impl Fn(f64) -> f64,
    ops: &DiffOperators,
    b: &[f64],
) -> Vec<f64> {
    let size = ops.size();
    assert_eq!(b.len(), size, "coefficient vector has the wrong length");
    let x = &ops.mapped_nodes;
    let row_dot = |m: &DMatrix<f64>, i: usize| (0..size).map(|j| m[(i, j)] * b[j]).sum::<f64>();

    let mut residual = Vec::with_capacity(size);
    residual.push(b[0] - 1.0);
    residual.push(row_dot(&ops.d1_scaled, 0));
    for i in 1..size - 1 {
        residual.push(
            x[i] * row_dot(&ops.d2_scaled, i) + 2.0 * row_dot(&ops.d1_scaled, i) + x[i] * g(b[i]),
        );
    }
    residual
}

pub fn assemble_residual(problem: &LaneEmdenProblem, ops: &DiffOperators, b: &[f64]) -> Vec<f64> {
    assemble_residual_with(|y| pow_signed(y, problem.m), ops, b)
}

#[derive(Clone, Debug)]
pub struct JacobianAssembly {
    pub matrix: DMatrix<f64>,
    /// An entry `∂(yᵐ)/∂y` was singular and has been replaced by 0.
    pub singular_nonlinear_term: bool,
}

pub fn assemble_jacobian(
    problem: &LaneEmdenProblem,
    ops: &DiffOperators,
    b: &[f64],
) -> JacobianAssembly {
    let size = ops.size();
    assert_eq!(b.len(), size, "coefficient vector has the wrong length");
    let x = &ops.mapped_nodes;
    let mut matrix = DMatrix::zeros(size, size);
    let mut singular = false;

    matrix[(0, 0)] = 1.0;
    for j in 0..size {
        matrix[(1, j)] = ops.d1_scaled[(0, j)];
    }
    for i in 1..size - 1 {
        for j in 0..size {
            matrix[(i + 1, j)] = x[i] * ops.d2_scaled[(i, j)] + 2.0 * ops.d1_scaled[(i, j)];
        }
        let mut slope = pow_signed_deriv(b[i], problem.m);
        if !slope.is_finite() {
            slope = 0.0;
            singular = true;
        }
        matrix[(i + 1, i)] += x[i] * slope;
    }
    JacobianAssembly {
        matrix,
        singular_nonlinear_term: singular,
    }
}

/// `bⱼ = (1 + ℑⱼ²/3)^(−1/2)`, the m = 5 solution.
pub fn initial_guess(mapped_nodes: &[f64]) -> Vec<f64> {
    mapped_nodes
        .iter()
        .map(|x| (1.0 + x * x / 3.0).powf(-0.5))
        .collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()))
}

pub fn newton_solve(problem: &LaneEmdenProblem, config: &SolverConfig) -> Result<SpectralSolution> {
    config.validate()?;
    let ops = DiffOperators::new(&config.basis_params()?)?;
    newton_solve_with(problem, config, &ops)
}

/// Same as [`newton_solve`] with prebuilt operators (which must match `config`).
pub fn newton_solve_with(
    problem: &LaneEmdenProblem,
    config: &SolverConfig,
    ops: &DiffOperators,
) -> Result<SpectralSolution> {
    config.validate()?;
    let mut b = initial_guess(&ops.mapped_nodes);
    let mut norm = inf_norm(&assemble_residual(problem, ops, &b));
    let mut history = vec![norm];
    let mut singular_term = false;
    let mut iterations = 0;

    while norm > config.newton_tol && iterations < config.max_iter {
        let jac = assemble_jacobian(problem, ops, &b);
        singular_term |= jac.singular_nonlinear_term;
        let residual = DVector::from_vec(assemble_residual(problem, ops, &b));
        let step = solve_dense(jac.matrix, -residual)?;

        let mut factor = 1.0;
        let accepted = loop {
            let mut trial: Vec<f64> = b
                .iter()
                .zip(step.iter())
                .map(|(v, d)| v + factor * d)
                .collect();
            // the boundary row is linear with unit coefficient
            trial[0] = 1.0;
            let trial_norm = inf_norm(&assemble_residual(problem, ops, &trial));
            if trial_norm < norm {
                break Some((trial, trial_norm));
            }
            factor /= 2.0;
            if factor < config.min_step {
                break None;
            }
        };
        iterations += 1;
        match accepted {
            Some((trial, trial_norm)) => {
                b = trial;
                norm = trial_norm;
                history.push(norm);
            }
            None => break,
        }
    }

    Ok(SpectralSolution {
        converged: norm <= config.newton_tol,
        b,
        residual_norm: norm,
        iterations,
        config: *config,
        mapped_nodes: ops.mapped_nodes.clone(),
        residual_history: history,
        singular_nonlinear_term: singular_term,
    })
}

/// Dense LU with partial pivoting; rejects pivots below `1e-14·max|A|`.
fn solve_dense(matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    let scale = matrix.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let threshold = 1e-14 * scale;
    let lu = matrix.lu();
    let u = lu.u();
    let pivot = u
        .diagonal()
        .iter()
        .fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
    if !(pivot >= threshold) || scale == 0.0 {
        return Err(Error::SingularJacobian { pivot, threshold });
    }
    lu.solve(&rhs)
        .ok_or(Error::SingularJacobian { pivot, threshold })
}
