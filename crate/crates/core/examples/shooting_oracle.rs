//! Adaptive shooting reference compared with the closed forms and the spectral solution.

use mgl_lane_emden::operators::DiffOperators;
use mgl_lane_emden::reference::{
    closed_form, compare_profiles, linspace, shooting_oracle, ShootingOptions, SpectralProfile,
};
use mgl_lane_emden::solver::{newton_solve, LaneEmdenProblem, SolverConfig};

fn main() -> mgl_lane_emden::Result<()> {
    let opts = ShootingOptions::default();
    for m in [0.0, 1.0, 5.0] {
        let shot = shooting_oracle(m, 4.0, &opts)?;
        let xs = linspace(0.0, 2.0, 41);
        let cmp = compare_profiles(&shot.profile, &|x: f64| closed_form(m, x), &xs)?;
        println!(
            "m={m}: {} steps, max deviation from closed form {:.1e}",
            shot.accepted_steps, cmp.max_abs
        );
    }

    let shot = shooting_oracle(3.0, 8.0, &opts)?;
    let zero = shot.first_zero.expect("m = 3 has a zero");
    println!("m=3 shooting zero {zero:.10}");

    let config = SolverConfig::new(7, 1.0);
    let solution = newton_solve(&LaneEmdenProblem::new(3.0)?, &config)?;
    let ops = DiffOperators::new(&config.basis_params()?)?;
    let spectral = SpectralProfile {
        ops: &ops,
        coeffs: &solution.b,
    };
    let cmp = compare_profiles(&spectral, &shot.profile, &linspace(0.0, zero - 0.1, 68))?;
    println!("m=3 n=7 spectral vs shooting: max-abs {:.2e}", cmp.max_abs);
    Ok(())
}
