//! Generalized Laguerre polynomials, their zeros, the Gauss-Radau-Laguerre
//! node set and the modified generalized Laguerre (MGL) functions
//!
//! ```text
//! Γₙᵅ(x) = exp(−x/(2L)) · Lₙᵅ(x/L),   L > 0, α > −1.
//! ```
//!
//! Polynomials are evaluated with the three-term recurrence
//!
//! ```text
//! L₀ᵅ = 1,  L₁ᵅ = 1 + α − x,
//! k·Lₖᵅ = (2k − 1 + α − x)·Lₖ₋₁ᵅ − (k + α − 1)·Lₖ₋₂ᵅ
//! ```
//!
//! and derivatives with `∂ₓLₙᵅ = −Σ_{k<n} Lₖᵅ`. No exponential weighting is
//! applied here except in [`eval_mgl`].

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree for which the recurrence is used.
pub const MAX_DEGREE: usize = 30;

/// Largest |x| for which the recurrence is used.
pub const MAX_ARGUMENT: f64 = 200.0;

const NEWTON_POLISH_MAX_ITER: usize = 50;
const NEWTON_POLISH_RTOL: f64 = 1e-13;

/// Degree, Laguerre parameter and map parameter of one MGL discretization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisParams {
    pub n: usize,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub map_l: f64,
}

impl BasisParams {
    pub fn new(n: usize, alpha: f64, map_l: f64) -> Result<Self> {
        let params = BasisParams { n, alpha, map_l };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("degree n must be ≥ 1".into()));
        }
        if self.n > MAX_DEGREE {
            return Err(Error::Range(format!(
                "degree n = {} exceeds {MAX_DEGREE}",
                self.n
            )));
        }
        check_alpha(self.alpha)?;
        if !(self.map_l > 0.0 && self.map_l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "map parameter L = {} must be > 0",
                self.map_l
            )));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("α = {alpha} must be > −1")))
    }
}

fn check_envelope(n: usize, x: f64) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Range(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    if !(x.abs() <= MAX_ARGUMENT) {
        return Err(Error::Range(format!("|x| = {x} exceeds {MAX_ARGUMENT}")));
    }
    Ok(())
}

/// `[L₀ᵅ(x), …, Lₙᵅ(x)]` from a single recurrence sweep.
pub fn eval_laguerre_all(n: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_envelope(n, x)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    if n >= 1 {
        values.push(1.0 + alpha - x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 + alpha - x) * values[k - 1]
            - (kf + alpha - 1.0) * values[k - 2])
            / kf;
        values.push(next);
    }
    Ok(values)
}

/// `Lₙᵅ(x)` in one forward pass of the recurrence.
pub fn eval_laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_envelope(n, x)?;
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut curr) = (1.0, 1.0 + alpha - x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 + alpha - x) * curr - (kf + alpha - 1.0) * prev) / kf;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// `(d/dx)Lₙᵅ(x) = −Σ_{k=0}^{n−1} Lₖᵅ(x)`; zero for n = 0.
pub fn eval_laguerre_deriv(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if n == 0 {
        check_alpha(alpha)?;
        check_envelope(n, x)?;
        return Ok(0.0);
    }
    let values = eval_laguerre_all(n - 1, alpha, x)?;
    Ok(-values.iter().sum::<f64>())
}

/// Magnitude `max_k |Lₖᵅ(x)|, k ≤ n` of the recurrence terms at `x`.
///
/// Rounding in `Lₙᵅ(x)` is proportional to this, not to `|Lₙᵅ(x)|`, which
/// makes it the natural scale for residual tests near zeros.
pub fn recurrence_magnitude(n: usize, alpha: f64, x: f64) -> Result<f64> {
    Ok(eval_laguerre_all(n, alpha, x)?
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs())))
}

/// Generalized binomial coefficient `C(n + α, n) = Π_{k=1}^{n} (k + α)/k`,
/// which equals `Lₙᵅ(0)`.
pub fn binomial_n_alpha(n: usize, alpha: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (k as f64 + alpha) / k as f64)
}

/// The `n` simple positive zeros of `Lₙᵅ`, ascending.
///
/// Initial values are the eigenvalues of the symmetric tridiagonal Jacobi
/// matrix of the Laguerre recurrence; each is then polished by Newton's
/// method on the recurrence itself.
pub fn laguerre_zeros(n: usize, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if n < 1 {
        return Err(Error::InvalidParameter("degree n must be ≥ 1".into()));
    }
    if n > MAX_DEGREE {
        return Err(Error::Range(format!("degree {n} exceeds {MAX_DEGREE}")));
    }

    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + alpha + 1.0
        } else if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            (k * (k + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let mut zeros: Vec<f64> = SymmetricEigen::new(jacobi)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    zeros.sort_by(|a, b| a.total_cmp(b));

    for (index, zero) in zeros.iter_mut().enumerate() {
        *zero = polish_zero(n, alpha, *zero).ok_or(Error::ZeroNotConverged { index })?;
    }
    Ok(zeros)
}

fn polish_zero(n: usize, alpha: f64, start: f64) -> Option<f64> {
    let mut x = start;
    for _ in 0..NEWTON_POLISH_MAX_ITER {
        let values = eval_laguerre_all(n, alpha, x).ok()?;
        let value = values[n];
        let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if value.abs() <= NEWTON_POLISH_RTOL * scale {
            return Some(x);
        }
        let slope = -values[..n].iter().sum::<f64>();
        if slope == 0.0 || !slope.is_finite() {
            return None;
        }
        let step = value / slope;
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Some(x);
        }
    }
    None
}

/// Gauss-Radau-Laguerre collocation points `η₀ = 0 < η₁ < … < ηₙ` with the
/// values needed by the cardinal functions and differentiation matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct RadauNodeSet {
    /// `[0, zeros of Lₙᵅ...]`
    pub eta: Vec<f64>,
    /// `(d/dx)Lₙᵅ(ηⱼ)`, including `j = 0`.
    pub dln_at_eta: Vec<f64>,
    /// `Lₙᵅ(0) = C(n + α, n)`
    pub ln_at_zero: f64,
}

impl RadauNodeSet {
    /// Polynomial degree `n` (one less than the number of nodes).
    pub fn degree(&self) -> usize {
        self.eta.len() - 1
    }
}

pub fn radau_nodes(params: &BasisParams) -> Result<RadauNodeSet> {
    params.validate()?;
    let n = params.n;
    let mut eta = Vec::with_capacity(n + 1);
    eta.push(0.0);
    eta.extend(laguerre_zeros(n, params.alpha)?);
    let dln_at_eta = eta
        .iter()
        .map(|&x| eval_laguerre_deriv(n, params.alpha, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadauNodeSet {
        eta,
        dln_at_eta,
        ln_at_zero: binomial_n_alpha(n, params.alpha),
    })
}

/// `Γ_{n_index}ᵅ(x) = exp(−x/(2L)) · L_{n_index}ᵅ(x/L)` for `x ≥ 0`.
pub fn eval_mgl(params: &BasisParams, n_index: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain { x });
    }
    let t = x / params.map_l;
    Ok((-0.5 * t).exp() * eval_laguerre(n_index, params.alpha, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn low_degree_values() {
        assert_eq!(eval_laguerre(0, 0.5, 7.3).unwrap(), 1.0);
        assert_eq!(eval_laguerre(1, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(eval_laguerre(2, 1.0, 0.0).unwrap(), 3.0);
        assert_abs_diff_eq!(
            eval_laguerre(2, 1.0, 3.0 + SQRT3).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn batched_values() {
        assert_eq!(eval_laguerre_all(1, 1.0, 0.0).unwrap(), vec![1.0, 2.0]);
        assert_eq!(eval_laguerre_all(2, 0.0, 0.0).unwrap(), vec![1.0, 1.0, 1.0]);
        assert_eq!(eval_laguerre_all(2, 1.0, 1.0).unwrap(), vec![1.0, 1.0, 0.5]);
    }

    #[test]
    fn derivative_values() {
        assert_eq!(eval_laguerre_deriv(1, 1.0, 5.0).unwrap(), -1.0);
        assert_eq!(eval_laguerre_deriv(0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(eval_laguerre_deriv(2, 1.0, 3.0).unwrap(), 0.0);
        let h = 1e-6 * 3.0;
        let fd = (eval_laguerre(2, 1.0, 3.0 + h).unwrap()
            - eval_laguerre(2, 1.0, 3.0 - h).unwrap())
            / (2.0 * h);
        assert_abs_diff_eq!(fd, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            eval_laguerre(3, -1.0, 0.5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            eval_laguerre_all(3, -2.0, 0.5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(eval_laguerre(31, 0.0, 0.5), Err(Error::Range(_))));
        assert!(matches!(eval_laguerre(5, 0.0, 250.0), Err(Error::Range(_))));
        assert!(BasisParams::new(0, 1.0, 1.0).is_err());
        assert!(BasisParams::new(4, 1.0, 0.0).is_err());
        assert!(BasisParams::new(4, -1.0, 1.0).is_err());
        assert!(BasisParams::new(4, 1.0, 2.0).is_ok());
    }

    #[test]
    fn zeros_of_small_degrees() {
        assert_abs_diff_eq!(laguerre_zeros(1, 1.0).unwrap()[0], 2.0, epsilon = 1e-14);
        let z = laguerre_zeros(2, 0.0).unwrap();
        assert_abs_diff_eq!(z[0], 2.0 - 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(z[1], 2.0 + 2f64.sqrt(), epsilon = 1e-14);
        let z = laguerre_zeros(2, 1.0).unwrap();
        assert_abs_diff_eq!(z[0], 3.0 - SQRT3, epsilon = 1e-14);
        assert_abs_diff_eq!(z[1], 3.0 + SQRT3, epsilon = 1e-14);
    }

    #[test]
    fn radau_node_sets() {
        let nodes = radau_nodes(&BasisParams::new(1, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(nodes.eta[0], 0.0);
        assert_abs_diff_eq!(nodes.eta[1], 2.0, epsilon = 1e-14);
        assert_eq!(nodes.ln_at_zero, 2.0);

        let nodes = radau_nodes(&BasisParams::new(2, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(nodes.ln_at_zero, 3.0);
        assert_abs_diff_eq!(nodes.eta[1], 3.0 - SQRT3, epsilon = 1e-14);
        assert_abs_diff_eq!(nodes.eta[2], 3.0 + SQRT3, epsilon = 1e-14);
        // L₂¹′(x) = x − 3
        assert_abs_diff_eq!(nodes.dln_at_eta[0], -3.0, epsilon = 1e-14);

        for n in 1..=MAX_DEGREE {
            let nodes = radau_nodes(&BasisParams::new(n, 0.5, 2.0).unwrap()).unwrap();
            assert_eq!(nodes.eta.len(), n + 1);
            assert_eq!(nodes.eta[0], 0.0);
            assert!(nodes.eta.windows(2).all(|w| w[0] < w[1]));
            assert_abs_diff_eq!(
                nodes.ln_at_zero,
                eval_laguerre(n, 0.5, 0.0).unwrap(),
                epsilon = 1e-12 * nodes.ln_at_zero
            );
        }
    }

    #[test]
    fn mgl_values() {
        let p = BasisParams::new(4, 1.0, 1.7).unwrap();
        for x in [0.0, 0.3, 2.0, 9.0] {
            assert_abs_diff_eq!(
                eval_mgl(&p, 0, x).unwrap(),
                (-x / 3.4).exp(),
                epsilon = 1e-15
            );
        }
        let p = BasisParams::new(1, 1.0, 1.0).unwrap();
        assert_eq!(eval_mgl(&p, 1, 2.0).unwrap(), 0.0);
        let p = BasisParams::new(6, 2.5, 3.0).unwrap();
        assert_abs_diff_eq!(
            eval_mgl(&p, 6, 0.0).unwrap(),
            binomial_n_alpha(6, 2.5),
            epsilon = 1e-12
        );
        assert!(matches!(eval_mgl(&p, 2, -0.1), Err(Error::Domain { .. })));
    }
}
