//! Rank map parameters by the decay of the last coefficients.

use mgl_lane_emden::app::{scan_map_parameter, CANONICAL_L_GRID};
use mgl_lane_emden::solver::{LaneEmdenProblem, SolverConfig};

fn main() -> mgl_lane_emden::Result<()> {
    let report = scan_map_parameter(
        &LaneEmdenProblem::new(4.0)?,
        &SolverConfig::new(6, 1.0),
        &CANONICAL_L_GRID.points(),
    );
    for r in &report.records {
        println!(
            "L = {:.3}  converged {:5}  tail {:>10}  zero {:>12}",
            r.map_l,
            r.converged,
            r.tail_magnitude.map_or("-".into(), |t| format!("{t:.2e}")),
            r.first_zero.map_or("-".into(), |z| format!("{z:.6}"))
        );
    }
    println!("recommended L = {:?}", report.recommended_l);
    Ok(())
}
