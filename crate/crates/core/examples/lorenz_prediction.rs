//! One-step prediction of all three Lorenz variables; NMSE per variable and
//! their sum at a single cell.
//!
//!     cargo run --release --example lorenz_prediction

use prodres::harness::{run_prediction_experiment, ExperimentConfig, Metric, MetricKey, Task};
use prodres::reservoir::Family;

fn main() -> prodres::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::Lorenz,
        reservoir_size: 100,
        omega_grid: vec![0.1],
        lambda_grid: vec![0.8],
        trials: 3,
        ..Default::default()
    };
    let table = run_prediction_experiment(&cfg)?;
    for f in Family::ALL {
        let per_var: Vec<String> = (0..3)
            .map(|k| {
                let key = MetricKey::new(Metric::Nmse).tau(1).output(k);
                let a = table.aggregates_for(f, key).next().unwrap();
                format!("{:.3e}", a.mean.unwrap_or(f64::NAN))
            })
            .collect();
        let tot = table
            .aggregates_for(f, MetricKey::new(Metric::NmseTot).tau(1))
            .next()
            .unwrap();
        println!("{f:>8}: x y z = {}  total {:.3e}", per_var.join(" "), tot.mean.unwrap_or(f64::NAN));
    }
    Ok(())
}
