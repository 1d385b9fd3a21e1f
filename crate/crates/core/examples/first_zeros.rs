//! First zeros of spectral solutions against the exact values.

use mgl_lane_emden::operators::DiffOperators;
use mgl_lane_emden::reference::{
    first_zero, first_zero_reference, DEFAULT_SCAN_MAX, DEFAULT_SCAN_STEP,
};
use mgl_lane_emden::solver::{newton_solve, LaneEmdenProblem, SolverConfig};

fn main() -> mgl_lane_emden::Result<()> {
    for (m, n, map_l) in [(2.0, 6, 0.5), (3.0, 7, 1.0), (4.0, 6, 1.25)] {
        let config = SolverConfig::new(n, map_l);
        let solution = newton_solve(&LaneEmdenProblem::new(m)?, &config)?;
        let ops = DiffOperators::new(&config.basis_params()?)?;
        let zero = first_zero(&solution, &ops, DEFAULT_SCAN_STEP, DEFAULT_SCAN_MAX)?;
        let exact = first_zero_reference(m)?;
        println!(
            "m={m} n={n} L={map_l}: x* = {:.8}  exact {exact:.8}  |Δ| = {:.2e}",
            zero.x_star,
            (zero.x_star - exact).abs()
        );
    }
    Ok(())
}
