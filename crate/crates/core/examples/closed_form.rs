//! The product update computed three ways: element-wise products, the log/exp
//! form used internally, and the closed form after t steps.
//!
//!     cargo run --example closed_form

use nalgebra::DMatrix;
use prodres::reservoir::{
    closed_form_product_state, generate_weights, run_product, step_product, Family, ReservoirSpec,
    ReservoirState,
};
use prodres::tasks::uniform_input;

fn main() -> prodres::Result<()> {
    let n = 6;
    let w = generate_weights(n, 1, 0.8, 0.5, 3)?;
    let x0 = ReservoirState::from_slice(&uniform_input(n, 4)?)?;
    let u = uniform_input(50, 5)?;

    // x_i' = prod_j x_j^W_ij * u^w_i
    let direct: Vec<f64> = (0..n)
        .map(|i| {
            let mut p = u[0].powf(w.input()[(i, 0)]);
            for j in 0..n {
                p *= x0.values()[j].powf(w.recurrent()[(i, j)]);
            }
            p
        })
        .collect();
    let stepped = step_product(&x0, &u[..1], &w)?;
    let gap = direct
        .iter()
        .zip(stepped.values().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("one step, direct product vs log/exp: max gap {gap:.2e}");

    let inputs = DMatrix::from_column_slice(u.len(), 1, &u);
    let spec = ReservoirSpec::new(Family::Product, w.clone()).with_input_floor(None);
    let traj = run_product(&spec, x0.clone(), &inputs, 0)?;
    for t in [1, 10, 50] {
        let closed = closed_form_product_state(&x0, &inputs, &w, t)?;
        let gap = (closed.values() - traj.row(t - 1)).amax();
        println!("t={t:3}: iterated vs closed form max gap {gap:.2e}");
    }
    Ok(())
}
