//! One-step Mackey-Glass prediction over a coarse grid; prints the
//! log10 NMSE surface of the product reservoir and each family's best cell.
//!
//!     cargo run --release --example mackey_glass_prediction

use prodres::harness::{run_prediction_experiment, ExperimentConfig, Metric, MetricKey, Task};
use prodres::reservoir::Family;

fn main() -> prodres::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::MackeyGlass,
        reservoir_size: 50,
        omega_grid: vec![0.1, 0.4, 0.7, 1.0],
        lambda_grid: vec![0.2, 0.5, 0.8],
        trials: 3,
        ..Default::default()
    };
    let table = run_prediction_experiment(&cfg)?;
    let key = MetricKey::new(Metric::NmseTot).tau(1);

    println!("product log10 NMSE (rows omega, columns lambda {:?})", cfg.lambda_grid);
    for &omega in &cfg.omega_grid {
        let row: Vec<String> = table
            .aggregates_for(Family::Product, key)
            .filter(|a| a.omega == omega)
            .map(|a| a.log10_mean.map_or("  fail".into(), |v| format!("{v:6.2}")))
            .collect();
        println!("{omega:4.1}  {}", row.join(" "));
    }
    for f in Family::ALL {
        if let Some(b) = table.best(f, key) {
            println!(
                "{f:>8}: NMSE {:.3e} (MSE/Var {:.3e}) at omega={} lambda={}",
                b.mean.unwrap(),
                b.conventional_mean.unwrap_or(f64::NAN),
                b.omega,
                b.lambda
            );
        }
    }
    Ok(())
}
