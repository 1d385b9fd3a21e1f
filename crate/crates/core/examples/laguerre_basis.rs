//! Laguerre values, zeros and the Gauss-Radau node set.

use mgl_lane_emden::laguerre::{
    eval_laguerre, eval_laguerre_deriv, eval_mgl, laguerre_zeros, radau_nodes, BasisParams,
};

fn main() -> mgl_lane_emden::Result<()> {
    let (n, alpha) = (7, 1.0);
    for x in [0.0, 1.0, 5.0] {
        println!(
            "L_{n}^{alpha}({x}) = {:+.10}   d/dx = {:+.10}",
            eval_laguerre(n, alpha, x)?,
            eval_laguerre_deriv(n, alpha, x)?
        );
    }
    println!("zeros: {:.6?}", laguerre_zeros(n, alpha)?);

    let params = BasisParams::new(n, alpha, 2.0)?;
    let nodes = radau_nodes(&params)?;
    println!("radau nodes (eta): {:.6?}", nodes.eta);
    println!("MGL function at x = 3: {:+.10}", eval_mgl(&params, n, 3.0)?);
    Ok(())
}
