//! Nonlinear capacity: how well each family reconstructs Legendre polynomials
//! of delayed inputs, at the best cell of a small grid.
//!
//!     cargo run --release --example legendre_capacity

use prodres::harness::{run_capacity_experiment, ExperimentConfig, Metric, MetricKey, Task};
use prodres::reservoir::Family;

fn main() -> prodres::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::Legendre,
        orders: vec![2, 3, 4],
        tau_max: 20,
        omega_grid: vec![0.01, 0.1, 0.5],
        lambda_grid: vec![0.5, 0.95],
        trials: 5,
        ..Default::default()
    };
    let table = run_capacity_experiment(&cfg)?;
    for &n in &cfg.orders {
        let key = MetricKey::new(Metric::McTotal).order(Some(n));
        for f in Family::ALL {
            if let Some(best) = table.best(f, key) {
                println!(
                    "n={n} {f:>8}: {:.3} at omega={} lambda={}",
                    best.mean.unwrap(),
                    best.omega,
                    best.lambda
                );
            }
        }
    }
    Ok(())
}
