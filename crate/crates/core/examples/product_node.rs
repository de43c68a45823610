//! A single product node u^omega, with and without feedback. Negative inputs
//! land on the complex plane with phase pi * omega.
//!
//!     cargo run --example product_node

use num_complex::Complex64;
use prodres::reservoir::product_node_response;

fn main() -> prodres::Result<()> {
    for omega in [0.25, 0.5, 1.0] {
        println!("omega = {omega}");
        for u in [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0] {
            let y = product_node_response(u, omega, None)?;
            println!(
                "  u={u:5.2}  y={:+.4}{:+.4}i  |y|={:.4}  arg={:.4}",
                y.re,
                y.im,
                y.norm(),
                y.arg()
            );
        }
    }

    // feedback: y(t) = u(t)^omega * y(t-1)^Omega
    let mut y = Complex64::new(1.0, 0.0);
    for (t, u) in [0.5, 0.9, -0.3, 0.7].into_iter().enumerate() {
        y = product_node_response(u, 0.5, Some((y, 0.8)))?;
        println!("t={t} u={u:5.2} y={:+.4}{:+.4}i", y.re, y.im);
    }

    match product_node_response(0.0, 0.5, None) {
        Err(e) => println!("u = 0: {e}"),
        Ok(y) => println!("u = 0 gave {y}"),
    }
    Ok(())
}
