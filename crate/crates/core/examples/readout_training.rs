//! Driving a reservoir by hand, fitting a readout and predicting with it.
//!
//!     cargo run --example readout_training

use nalgebra::DMatrix;
use prodres::metrics::{capacity, nmse};
use prodres::readout::{predict, train_readout};
use prodres::reservoir::{generate_weights, run_reservoir, Family, ReservoirSpec};
use prodres::tasks::{delay_target, uniform_input};

fn main() -> prodres::Result<()> {
    let spec = ReservoirSpec::new(Family::Tanh, generate_weights(30, 1, 0.9, 0.1, 11)?);
    let u = uniform_input(1500, 12)?;
    let traj = run_reservoir(&spec, &DMatrix::from_column_slice(u.len(), 1, &u), 100)?;

    // row r is the state after input 100 + r; target: the input two steps earlier
    let target = delay_target(&u, 2)?;
    let y_hat = &target.values[100 - target.start..][..traj.len()];
    let readout = train_readout(&traj, y_hat, 1e-12)?;
    let y = predict(&readout, &traj)?;
    println!("in-sample capacity {:.4}", capacity(&y, y_hat)?.value);
    println!("in-sample NMSE {:.3e}", nmse(&y, y_hat)?);
    println!("bias weight {:.4}", readout.weights()[readout.size()]);
    Ok(())
}
