//! Solve the m = 3 polytrope and print the profile.

use mgl_lane_emden::operators::{eval_hat_interpolant, DiffOperators};
use mgl_lane_emden::solver::{newton_solve, LaneEmdenProblem, SolverConfig};

fn main() -> mgl_lane_emden::Result<()> {
    let config = SolverConfig::new(7, 1.0);
    let solution = newton_solve(&LaneEmdenProblem::new(3.0)?, &config)?;
    println!(
        "converged {} after {} Newton steps, residual {:.2e}",
        solution.converged, solution.iterations, solution.residual_norm
    );
    let ops = DiffOperators::new(&config.basis_params()?)?;
    for x in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 6.0] {
        println!(
            "y({x:>3}) = {:.6}",
            eval_hat_interpolant(&ops, &solution.b, x)?
        );
    }
    Ok(())
}
