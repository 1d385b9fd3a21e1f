//! Lagrangian cardinal functions on the Gauss-Radau-Laguerre nodes and the
//! pseudospectral differentiation matrices built from them.
//!
//! Polynomial cardinal functions:
//!
//! ```text
//! ℓ₀(x) = Lₙᵅ(x) / Lₙᵅ(0)
//! ℓⱼ(x) = x·Lₙᵅ(x) / (ηⱼ·Lₙᵅ′(ηⱼ)·(x − ηⱼ)),   j = 1…n
//! ```
//!
//! MGL cardinal functions carry the decaying weight,
//! `ℓ̂ⱼ(x) = ℓⱼ(x)·exp(−(x − ηⱼ)/2)`, and the product rule gives
//!
//! ```text
//! d̂ᵢⱼ  = (dᵢⱼ − ½δᵢⱼ)·exp((ηⱼ − ηᵢ)/2)
//! d̂²ᵢⱼ = (d²ᵢⱼ − dᵢⱼ + ¼δᵢⱼ)·exp((ηⱼ − ηᵢ)/2)
//! ```
//!
//! The mapped basis `ℓ̂ⱼ(x/L)` lives on the nodes `ℑⱼ = L·ηⱼ`; its matrices
//! are the MGL ones divided by `L` and `L²`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::laguerre::{eval_laguerre, radau_nodes, BasisParams, RadauNodeSet};

/// Relative distance to a node under which the removable singularity of
/// `ℓⱼ` is replaced by its limit value.
pub const NODE_SNAP_RTOL: f64 = 1e-9;

/// All differentiation matrices for one MGL discretization.
#[derive(Clone, Debug)]
pub struct DiffOperators {
    pub params: BasisParams,
    pub nodes: RadauNodeSet,
    /// `ℑⱼ = L·ηⱼ`
    pub mapped_nodes: Vec<f64>,
    pub d1_poly: DMatrix<f64>,
    pub d2_poly: DMatrix<f64>,
    pub d1_mgl: DMatrix<f64>,
    pub d2_mgl: DMatrix<f64>,
    /// `d1_mgl / L`
    pub d1_scaled: DMatrix<f64>,
    /// `d2_mgl / L²`
    pub d2_scaled: DMatrix<f64>,
}

impl DiffOperators {
    pub fn new(params: &BasisParams) -> Result<Self> {
        let nodes = radau_nodes(params)?;
        let d1_poly = build_poly_d1(&nodes, params.alpha);
        let d2_poly = build_poly_d2(&nodes, params.alpha);
        let d1_mgl = build_mgl_d1(&d1_poly, &nodes);
        let d2_mgl = build_mgl_d2(&d1_poly, &d2_poly, &nodes);
        let (d1_scaled, d2_scaled, mapped_nodes) =
            scale_operators(&d1_mgl, &d2_mgl, &nodes, params.map_l)?;
        Ok(DiffOperators {
            params: *params,
            nodes,
            mapped_nodes,
            d1_poly,
            d2_poly,
            d1_mgl,
            d2_mgl,
            d1_scaled,
            d2_scaled,
        })
    }

    pub fn size(&self) -> usize {
        self.nodes.eta.len()
    }
}

/// First-derivative matrix `dᵢⱼ = ℓⱼ′(ηᵢ)` of the polynomial cardinal basis.
pub fn build_poly_d1(nodes: &RadauNodeSet, alpha: f64) -> DMatrix<f64> {
    let n = nodes.degree();
    let eta = &nodes.eta;
    let dl = &nodes.dln_at_eta;
    let l0 = nodes.ln_at_zero;
    DMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => -(n as f64) / (alpha + 1.0),
        (0, j) => -l0 / (eta[j] * eta[j] * dl[j]),
        (i, 0) => dl[i] / l0,
        (i, j) if i == j => (1.0 - alpha + eta[i]) / (2.0 * eta[i]),
        (i, j) => eta[i] * dl[i] / (eta[j] * dl[j] * (eta[i] - eta[j])),
    })
}

/// Second-derivative matrix `ℓⱼ″(ηᵢ)` of the polynomial cardinal basis.
///
/// The interior diagonal and the first row follow from differentiating
/// `x·Lₙᵅ(x)` with the Laguerre differential equation
/// `x·y″ + (α + 1 − x)·y′ + n·y = 0` substituted at the nodes.
pub fn build_poly_d2(nodes: &RadauNodeSet, alpha: f64) -> DMatrix<f64> {
    let n = nodes.degree();
    let nf = n as f64;
    let eta = &nodes.eta;
    let dl = &nodes.dln_at_eta;
    let l0 = nodes.ln_at_zero;
    DMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => nf * (nf - 1.0) / ((alpha + 1.0) * (alpha + 2.0)),
        (0, j) => {
            -2.0 * l0 * (alpha + 1.0 - nf * eta[j]) / ((alpha + 1.0) * eta[j].powi(3) * dl[j])
        }
        (i, 0) => -(alpha + 1.0 - eta[i]) * dl[i] / (eta[i] * l0),
        (i, j) if i == j => {
            let e = eta[i];
            ((e - alpha).powi(2) - 1.0) / (3.0 * e * e) - (nf - 1.0) / (3.0 * e)
        }
        (i, j) => {
            let diff = eta[i] - eta[j];
            dl[i] * ((1.0 - alpha + eta[i]) * diff - 2.0 * eta[i]) / (eta[j] * diff * diff * dl[j])
        }
    })
}

fn weight_ratio(eta: &[f64], i: usize, j: usize) -> f64 {
    ((eta[j] - eta[i]) / 2.0).exp()
}

/// First-derivative matrix of the exponentially weighted cardinal basis.
pub fn build_mgl_d1(d1_poly: &DMatrix<f64>, nodes: &RadauNodeSet) -> DMatrix<f64> {
    let eta = &nodes.eta;
    DMatrix::from_fn(d1_poly.nrows(), d1_poly.ncols(), |i, j| {
        let delta = if i == j { 0.5 } else { 0.0 };
        (d1_poly[(i, j)] - delta) * weight_ratio(eta, i, j)
    })
}

/// Second-derivative matrix of the exponentially weighted cardinal basis.
pub fn build_mgl_d2(
    d1_poly: &DMatrix<f64>,
    d2_poly: &DMatrix<f64>,
    nodes: &RadauNodeSet,
) -> DMatrix<f64> {
    let eta = &nodes.eta;
    DMatrix::from_fn(d2_poly.nrows(), d2_poly.ncols(), |i, j| {
        let delta = if i == j { 0.25 } else { 0.0 };
        (d2_poly[(i, j)] - d1_poly[(i, j)] + delta) * weight_ratio(eta, i, j)
    })
}

/// Rescale the MGL matrices to the mapped variable `x = L·η`.
pub fn scale_operators(
    d1_mgl: &DMatrix<f64>,
    d2_mgl: &DMatrix<f64>,
    nodes: &RadauNodeSet,
    map_l: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<f64>)> {
    if !(map_l > 0.0 && map_l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "map parameter L = {map_l} must be > 0"
        )));
    }
    let mapped = nodes.eta.iter().map(|e| map_l * e).collect();
    Ok((d1_mgl / map_l, d2_mgl / (map_l * map_l), mapped))
}

/// Values of every mapped cardinal function `ℓ̂ⱼ(x/L)` at `x ≥ 0`.
pub fn cardinal_values(ops: &DiffOperators, x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0) {
        return Err(Error::Domain { x });
    }
    let params = &ops.params;
    let nodes = &ops.nodes;
    let n = params.n;
    let t = x / params.map_l;
    let ln_t = eval_laguerre(n, params.alpha, t)?;

    let mut values = Vec::with_capacity(n + 1);
    values.push((-0.5 * t).exp() * ln_t / nodes.ln_at_zero);
    for j in 1..=n {
        let eta_j = nodes.eta[j];
        let gap = t - eta_j;
        if gap.abs() < NODE_SNAP_RTOL * eta_j.max(1.0) {
            values.push(1.0);
            continue;
        }
        let value = t * ln_t * (-0.5 * gap).exp() / (eta_j * nodes.dln_at_eta[j] * gap);
        #[cfg(debug_assertions)]
        if gap.abs() < 1e-6 * eta_j.max(1.0) {
            debug_check_near_node(ops, j, t, value);
        }
        values.push(value);
    }
    Ok(values)
}

/// Compare the closed form against `1 + d̂ⱼⱼ·(t − ηⱼ)` close to a node.
#[cfg(debug_assertions)]
fn debug_check_near_node(ops: &DiffOperators, j: usize, t: f64, value: f64) {
    let eta_j = ops.nodes.eta[j];
    let gap = t - eta_j;
    let taylor = 1.0 + ops.d1_mgl[(j, j)] * gap;
    let magnitude = crate::laguerre::recurrence_magnitude(ops.params.n, ops.params.alpha, t)
        .unwrap_or(f64::INFINITY);
    let rounding =
        64.0 * f64::EPSILON * magnitude * t / (eta_j * ops.nodes.dln_at_eta[j] * gap).abs();
    debug_assert!(
        (value - taylor).abs() <= 1e-6 + rounding,
        "cardinal function {j} near its node: closed form {value}, Taylor {taylor}"
    );
}

/// `I_n y(x) = Σⱼ bⱼ·ℓ̂ⱼ(x/L)`.
pub fn eval_hat_interpolant(ops: &DiffOperators, coeffs: &[f64], x: f64) -> Result<f64> {
    if coeffs.len() != ops.size() {
        return Err(Error::InvalidParameter(format!(
            "expected {} coefficients, got {}",
            ops.size(),
            coeffs.len()
        )));
    }
    Ok(cardinal_values(ops, x)?
        .iter()
        .zip(coeffs)
        .map(|(l, b)| l * b)
        .sum())
}
