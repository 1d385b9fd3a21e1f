//! Build the MGL differentiation matrices and differentiate a decaying function.

use mgl_lane_emden::laguerre::BasisParams;
use mgl_lane_emden::operators::DiffOperators;

fn main() -> mgl_lane_emden::Result<()> {
    let ops = DiffOperators::new(&BasisParams::new(6, 1.0, 1.0)?)?;
    println!("first-derivative matrix:\n{:.4}", ops.d1_mgl);

    // f(x) = (1 + x) e^{-x/2} lies in the span, so the derivative is exact.
    let x = &ops.mapped_nodes;
    let f: Vec<f64> = x.iter().map(|x| (1.0 + x) * (-x / 2.0).exp()).collect();
    for (i, xi) in x.iter().enumerate() {
        let d1: f64 = (0..ops.size()).map(|j| ops.d1_scaled[(i, j)] * f[j]).sum();
        let d2: f64 = (0..ops.size()).map(|j| ops.d2_scaled[(i, j)] * f[j]).sum();
        let exact1 = (0.5 - xi / 2.0) * (-xi / 2.0).exp();
        let exact2 = (xi / 4.0 - 0.75) * (-xi / 2.0).exp();
        println!(
            "x = {xi:8.4}  f' err {:.1e}  f'' err {:.1e}",
            (d1 - exact1).abs(),
            (d2 - exact2).abs()
        );
    }
    Ok(())
}
