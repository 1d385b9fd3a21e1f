//! Lagrangian collocation in modified generalized Laguerre (MGL) functions
//! for Lane-Emden type equations on the half-line `[0, ∞)`.
//!
//! ```
//! use mgl_lane_emden::{eval_hat_interpolant, newton_solve, DiffOperators, LaneEmdenProblem, SolverConfig};
//!
//! let config = SolverConfig::new(7, 1.0);
//! let solution = newton_solve(&LaneEmdenProblem::new(3.0)?, &config)?;
//! let ops = DiffOperators::new(&config.basis_params()?)?;
//! let y1 = eval_hat_interpolant(&ops, &solution.b, 1.0)?;
//! assert!(solution.converged && (y1 - 0.855).abs() < 1e-2);
//! # Ok::<(), mgl_lane_emden::Error>(())
//! ```

pub mod app;
pub mod error;
pub mod laguerre;
pub mod operators;
pub mod reference;
pub mod solver;

pub use error::{Error, Result};
pub use laguerre::{
    eval_laguerre, eval_laguerre_all, eval_laguerre_deriv, eval_mgl, laguerre_zeros, radau_nodes,
    BasisParams, RadauNodeSet,
};
pub use operators::{
    build_mgl_d1, build_mgl_d2, build_poly_d1, build_poly_d2, eval_hat_interpolant,
    scale_operators, DiffOperators,
};
pub use reference::{
    closed_form, compare_profiles, first_zero, first_zero_reference, shooting_oracle,
    tabulated_reference, FirstZeroResult, ReferenceProfile, ShootingOptions,
};
pub use solver::{
    assemble_jacobian, assemble_residual, newton_solve, pow_signed, LaneEmdenProblem, SolverConfig,
    SpectralSolution,
};
