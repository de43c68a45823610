//! Echo-state probe: two copies of one product reservoir started from
//! different positive states and fed the same input converge.
//!
//!     cargo run --release --example esp_probe

use nalgebra::DMatrix;
use prodres::reservoir::{esp_divergence, generate_weights, Family, ReservoirSpec, ReservoirState};
use prodres::tasks::uniform_input;

fn main() -> prodres::Result<()> {
    let n = 20;
    let u = uniform_input(1000, 1)?;
    let inputs = DMatrix::from_column_slice(u.len(), 1, &u);
    for lambda in [0.5, 0.8, 0.95] {
        let spec = ReservoirSpec::new(Family::Product, generate_weights(n, 1, lambda, 0.2, 2)?);
        let a = ReservoirState::from_slice(&uniform_input(n, 3)?)?;
        let b = ReservoirState::from_slice(&uniform_input(n, 4)?)?;
        let d = esp_divergence(&spec, &inputs, a, b)?;
        println!(
            "lambda={lambda}: d(1)={:.3e} d(10)={:.3e} d(100)={:.3e} d(1000)={:.3e}",
            d[0], d[9], d[99], d[999]
        );
    }
    Ok(())
}
