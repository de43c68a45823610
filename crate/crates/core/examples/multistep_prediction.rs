//! Prediction error against horizon, each family at its best one-step cell.
//!
//!     cargo run --release --example multistep_prediction

use prodres::harness::{run_multistep_experiment, ExperimentConfig, Metric, MetricKey, Task};
use prodres::reservoir::Family;

fn main() -> prodres::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::MackeyGlass,
        reservoir_size: 50,
        omega_grid: vec![0.1, 0.5, 1.0],
        lambda_grid: vec![0.2, 0.8],
        trials: 3,
        horizons: vec![1, 5, 10, 20, 50],
        ..Default::default()
    };
    let table = run_multistep_experiment(&cfg)?;
    for f in Family::ALL {
        let first = table.aggregates.iter().find(|a| a.family == f).unwrap();
        print!("{f:>8} (omega={}, lambda={}):", first.omega, first.lambda);
        for &h in &cfg.horizons {
            let a = table
                .aggregates_for(f, MetricKey::new(Metric::NmseTot).tau(h))
                .next()
                .unwrap();
            print!(" h={h}: {:.2}", a.log10_mean.unwrap_or(f64::NAN));
        }
        println!();
    }
    Ok(())
}
