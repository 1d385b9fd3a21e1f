//! Profile and first-zero tables for the canonical runs, with deltas.

use mgl_lane_emden::app::reproduce_tables;
use mgl_lane_emden::solver::SolverConfig;

fn main() {
    let tables = reproduce_tables(&SolverConfig::new(7, 1.0));
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "x", "present", "reference", "delta"
    );
    for r in &tables.table1 {
        println!(
            "{:>6} {:>10.6} {:>10.6} {:>10.2e}",
            r.x, r.present, r.reference, r.abs_delta
        );
    }
    println!();
    println!(
        "{:>3} {:>3} {:>6} {:>12} {:>12} {:>10}",
        "m", "n", "L", "present", "reference", "delta"
    );
    for r in &tables.table2 {
        println!(
            "{:>3} {:>3} {:>6} {:>12.8} {:>12.8} {:>10.2e}",
            r.m,
            r.n,
            r.map_l,
            r.present.unwrap_or(f64::NAN),
            r.reference,
            r.abs_delta.unwrap_or(f64::NAN)
        );
    }
    println!("within tolerance: {}", tables.within_tolerance);
}
