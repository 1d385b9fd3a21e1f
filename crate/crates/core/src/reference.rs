//! Reference solutions and validation helpers: closed forms for m ∈ {0, 1, 5},
//! an independent shooting integrator, published reference values, first-zero
//! extraction and profile comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{eval_hat_interpolant, DiffOperators};
use crate::solver::{pow_signed, SpectralSolution};

/// Tabulated m = 3 reference values (x, y).
pub const TABULATED_M3: [(f64, f64); 8] = [
    (0.0, 1.0),
    (0.1, 0.998336),
    (0.5, 0.959839),
    (1.0, 0.855058),
    (5.0, 0.110820),
    (6.0, 0.043738),
    (6.8, 0.004168),
    (6.896, 0.000036),
];

/// Published Lagrangian-MGL values for m = 3, n = 7, L = 1 (x, y).
pub const PUBLISHED_MGL_M3: [(f64, f64); 8] = [
    (0.0, 1.0),
    (0.1, 0.998323),
    (0.5, 0.959821),
    (1.0, 0.855057),
    (5.0, 0.110820),
    (6.0, 0.043718),
    (6.8, 0.004165),
    (6.896, 0.000035),
];

/// Exact first zeros (m, x*).
pub const EXACT_FIRST_ZEROS: [(f64, f64); 3] =
    [(2.0, 4.35287460), (3.0, 6.89684862), (4.0, 14.9715463)];

/// Published Lagrangian-MGL first zeros (m, n, x*).
pub const PUBLISHED_MGL_FIRST_ZEROS: [(f64, usize, f64); 3] =
    [(2.0, 6, 4.352875), (3.0, 7, 6.896849), (4.0, 6, 14.971546)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileSource {
    ClosedForm,
    Shooting,
    Tabulated,
}

/// A reference solution sampled on an ascending grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProfile {
    pub m: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `y′` at every grid point, when known; enables Hermite interpolation.
    pub slopes: Option<Vec<f64>>,
    pub source: ProfileSource,
}

/// Anything that can be evaluated as a profile `y(x)`.
pub trait Profile {
    fn value_at(&self, x: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> Result<f64>> Profile for F {
    fn value_at(&self, x: f64) -> Result<f64> {
        self(x)
    }
}

impl Profile for ReferenceProfile {
    /// Closed forms are evaluated exactly. Other sources interpolate: quintic
    /// Hermite for shooting output (curvature from the ODE), cubic Hermite
    /// when slopes are stored, linear otherwise.
    fn value_at(&self, x: f64) -> Result<f64> {
        if self.source == ProfileSource::ClosedForm {
            return closed_form(self.m, x);
        }
        let (first, last) = (self.xs[0], *self.xs.last().unwrap());
        let slack = 1e-12 * last.abs().max(1.0);
        if !(x >= first - slack && x <= last + slack) {
            return Err(Error::Domain { x });
        }
        let x = x.clamp(first, last);
        let k = self
            .xs
            .partition_point(|&v| v <= x)
            .clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        Ok(match &self.slopes {
            Some(d) if self.source == ProfileSource::Shooting => {
                let curvature = |x: f64, y: f64, dy: f64| {
                    if x == 0.0 {
                        -1.0 / 3.0
                    } else {
                        lane_emden_rhs(self.m, x, [y, dy])[1]
                    }
                };
                let (c0, c1) = (curvature(x0, y0, d[k - 1]), curvature(x1, y1, d[k]));
                let (s2, s3, s4, s5) = (s * s, s.powi(3), s.powi(4), s.powi(5));
                let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
                let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
                let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
                let h3 = 0.5 * (s3 - 2.0 * s4 + s5);
                let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
                let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
                h0 * y0
                    + h1 * h * d[k - 1]
                    + h2 * h * h * c0
                    + h3 * h * h * c1
                    + h4 * h * d[k]
                    + h5 * y1
            }
            Some(d) => {
                let (h00, h10) = (
                    2.0 * s.powi(3) - 3.0 * s * s + 1.0,
                    s.powi(3) - 2.0 * s * s + s,
                );
                let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
                h00 * y0 + h10 * h * d[k - 1] + h01 * y1 + h11 * h * d[k]
            }
            None => y0 + s * (y1 - y0),
        })
    }
}

/// The spectral interpolant `I_n y` as a [`Profile`].
pub struct SpectralProfile<'a> {
    pub ops: &'a DiffOperators,
    pub coeffs: &'a [f64],
}

impl Profile for SpectralProfile<'_> {
    fn value_at(&self, x: f64) -> Result<f64> {
        eval_hat_interpolant(self.ops, self.coeffs, x)
    }
}

/// Closed-form solutions: `1 − x²/6` (m = 0), `sin x / x` (m = 1) and
/// `(1 + x²/3)^(−1/2)` (m = 5).
pub fn closed_form(m: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain { x });
    }
    match m {
        m if m == 0.0 => Ok(1.0 - x * x / 6.0),
        m if m == 1.0 => Ok(if x == 0.0 { 1.0 } else { x.sin() / x }),
        m if m == 5.0 => Ok((1.0 + x * x / 3.0).powf(-0.5)),
        m => Err(Error::UnsupportedIndex(m)),
    }
}

pub fn closed_form_profile(m: f64, xs: &[f64]) -> Result<ReferenceProfile> {
    let ys = xs
        .iter()
        .map(|&x| closed_form(m, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReferenceProfile {
        m,
        xs: xs.to_vec(),
        ys,
        slopes: None,
        source: ProfileSource::ClosedForm,
    })
}

pub fn tabulated_reference(m: f64) -> Result<ReferenceProfile> {
    if m != 3.0 {
        return Err(Error::UnsupportedIndex(m));
    }
    Ok(ReferenceProfile {
        m,
        xs: TABULATED_M3.iter().map(|p| p.0).collect(),
        ys: TABULATED_M3.iter().map(|p| p.1).collect(),
        slopes: None,
        source: ProfileSource::Tabulated,
    })
}

pub fn first_zero_reference(m: f64) -> Result<f64> {
    EXACT_FIRST_ZEROS
        .iter()
        .find(|(k, _)| *k == m)
        .map(|(_, x)| *x)
        .ok_or(Error::UnsupportedIndex(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingOptions {
    /// Offset from the singular origin where the series start is applied.
    pub h_series: f64,
    /// Local error tolerance of the step-doubling RK4 controller.
    pub tol: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            h_series: 1e-3,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShootingProfile {
    pub profile: ReferenceProfile,
    /// Location of the first `y = 0` crossing, if reached before `x_end`.
    pub first_zero: Option<f64>,
    pub accepted_steps: usize,
}

type State = [f64; 2];

fn lane_emden_rhs(m: f64, x: f64, s: State) -> State {
    [s[1], -2.0 * s[1] / x - pow_signed(s[0], m)]
}

fn rk4_step(m: f64, x: f64, s: State, h: f64) -> State {
    let add = |s: State, k: State, c: f64| [s[0] + c * k[0], s[1] + c * k[1]];
    let k1 = lane_emden_rhs(m, x, s);
    let k2 = lane_emden_rhs(m, x + h / 2.0, add(s, k1, h / 2.0));
    let k3 = lane_emden_rhs(m, x + h / 2.0, add(s, k2, h / 2.0));
    let k4 = lane_emden_rhs(m, x + h, add(s, k3, h));
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// One full step against two half steps; returns the extrapolated state
/// and the error estimate.
fn doubled_step(m: f64, x: f64, s: State, h: f64) -> (State, f64) {
    let full = rk4_step(m, x, s, h);
    let half = rk4_step(m, x + h / 2.0, rk4_step(m, x, s, h / 2.0), h / 2.0);
    let err = (half[0] - full[0]).abs().max((half[1] - full[1]).abs()) / 15.0;
    let extrap = [
        half[0] + (half[0] - full[0]) / 15.0,
        half[1] + (half[1] - full[1]) / 15.0,
    ];
    (extrap, err)
}

/// Integrate `y″ + (2/x)y′ + yᵐ = 0` outward from a series start at
/// `h_series`, stopping at `x_end` or at the first zero of `y`.
pub fn shooting_oracle(m: f64, x_end: f64, options: &ShootingOptions) -> Result<ShootingProfile> {
    let ShootingOptions { h_series, tol } = *options;
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m = {m} must be ≥ 0")));
    }
    if !(h_series > 0.0 && x_end > h_series && tol > 0.0) {
        return Err(Error::InvalidParameter(
            "need 0 < h_series < x_end and tol > 0".into(),
        ));
    }

    // y = 1 − x²/6 + m·x⁴/120 + O(x⁶)
    let x0 = h_series;
    let mut s: State = [
        1.0 - x0 * x0 / 6.0 + m * x0.powi(4) / 120.0,
        -x0 / 3.0 + m * x0.powi(3) / 30.0,
    ];
    let mut x = x0;
    let mut xs = vec![0.0, x];
    let mut ys = vec![1.0, s[0]];
    let mut slopes = vec![0.0, s[1]];
    let mut h = 1e-2_f64.min(x_end - x);
    let mut first_zero = None;
    let mut accepted = 0;

    while x < x_end {
        if h < 1e-12 {
            return Err(Error::StepUnderflow { x, h });
        }
        let h_try = h.min(x_end - x);
        let (next, err) = doubled_step(m, x, s, h_try);
        if err > tol {
            h = h_try * (0.9 * (tol / err).powf(0.2)).max(0.2);
            continue;
        }
        accepted += 1;
        if next[0] <= 0.0 {
            let (tau, state) = locate_crossing(m, x, s, h_try);
            x += tau;
            xs.push(x);
            ys.push(state[0]);
            slopes.push(state[1]);
            first_zero = Some(x);
            break;
        }
        x = if h_try == x_end - x { x_end } else { x + h_try };
        s = next;
        xs.push(x);
        ys.push(s[0]);
        slopes.push(s[1]);
        let grow = if err == 0.0 {
            2.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0)
        };
        h = h_try * grow;
    }

    Ok(ShootingProfile {
        profile: ReferenceProfile {
            m,
            xs,
            ys,
            slopes: Some(slopes),
            source: ProfileSource::Shooting,
        },
        first_zero,
        accepted_steps: accepted,
    })
}

/// Bisect the step length in `(0, h]` for the sign change of `y`.
fn locate_crossing(m: f64, x: f64, s: State, h: f64) -> (f64, State) {
    let (mut lo, mut hi) = (0.0, h);
    let mut state = doubled_step(m, x, s, h).0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let trial = doubled_step(m, x, s, mid).0;
        if trial[0] > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            state = trial;
        }
    }
    (hi, state)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstZeroResult {
    pub x_star: f64,
    /// Scan interval that contained the sign change.
    pub bracket: (f64, f64),
    pub refinement_iterations: usize,
}

/// First sign change of `f` on `[0, x_max]`, scanned with `scan_step` and
/// refined by bisection.
pub fn find_first_zero(
    f: impl Fn(f64) -> Result<f64>,
    scan_step: f64,
    x_max: f64,
) -> Result<FirstZeroResult> {
    if !(scan_step > 0.0 && x_max > 0.0) {
        return Err(Error::InvalidParameter(
            "scan_step and x_max must be > 0".into(),
        ));
    }
    let steps = (x_max / scan_step).ceil() as usize;
    let mut lo = 0.0;
    let mut f_lo = f(lo)?;
    for k in 1..=steps {
        let hi = (k as f64 * scan_step).min(x_max);
        let f_hi = f(hi)?;
        if f_lo == 0.0 && k == 1 {
            return Ok(FirstZeroResult {
                x_star: 0.0,
                bracket: (0.0, 0.0),
                refinement_iterations: 0,
            });
        }
        if f_hi == 0.0 {
            return Ok(FirstZeroResult {
                x_star: hi,
                bracket: (hi, hi),
                refinement_iterations: 0,
            });
        }
        if f_lo.signum() != f_hi.signum() {
            return bisect(&f, (lo, f_lo), (hi, f_hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NoZeroFound { x_max })
}

fn bisect(
    f: &impl Fn(f64) -> Result<f64>,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
) -> Result<FirstZeroResult> {
    let bracket = (a, b);
    let mut iterations = 0;
    while iterations < 200 && (b - a > 1e-13 || fa.abs().min(fb.abs()) > 1e-12) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        iterations += 1;
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(FirstZeroResult {
                x_star: mid,
                bracket,
                refinement_iterations: iterations,
            });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let x_star = if fa.abs() <= fb.abs() { a } else { b };
    Ok(FirstZeroResult {
        x_star,
        bracket,
        refinement_iterations: iterations,
    })
}

/// First zero of the spectral interpolant of `solution`.
pub fn first_zero(
    solution: &SpectralSolution,
    ops: &DiffOperators,
    scan_step: f64,
    x_max: f64,
) -> Result<FirstZeroResult> {
    find_first_zero(
        |x| eval_hat_interpolant(ops, &solution.b, x),
        scan_step,
        x_max,
    )
}

pub const DEFAULT_SCAN_STEP: f64 = 0.05;
pub const DEFAULT_SCAN_MAX: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDeviation {
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileComparison {
    pub points: Vec<PointDeviation>,
    pub max_abs: f64,
}

/// Pointwise absolute differences of two profiles on `xs`, in grid order.
pub fn compare_profiles<A, B>(a: &A, b: &B, xs: &[f64]) -> Result<ProfileComparison>
where
    A: Profile + ?Sized,
    B: Profile + ?Sized,
{
    let points = xs
        .iter()
        .map(|&x| {
            let (va, vb) = (a.value_at(x)?, b.value_at(x)?);
            Ok(PointDeviation {
                x,
                a: va,
                b: vb,
                abs_diff: (va - vb).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs = points.iter().fold(0.0_f64, |acc, p| acc.max(p.abs_diff));
    Ok(ProfileComparison { points, max_abs })
}

/// `count` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}
