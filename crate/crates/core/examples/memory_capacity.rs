//! Memory curves MC_tau of the three reservoir families at one grid cell.
//!
//!     cargo run --release --example memory_capacity

use prodres::harness::{run_capacity_experiment, ExperimentConfig, Metric, MetricKey, Task};
use prodres::reservoir::Family;

fn main() -> prodres::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::Memory,
        reservoir_size: 20,
        tau_max: 40,
        omega_grid: vec![0.2],
        lambda_grid: vec![0.9],
        trials: 10,
        ..Default::default()
    };
    let table = run_capacity_experiment(&cfg)?;

    println!("tau  linear   tanh     product");
    for tau in (1..=cfg.tau_max).step_by(3) {
        let key = MetricKey::new(Metric::Mc).tau(tau);
        let cols: Vec<String> = Family::ALL
            .iter()
            .map(|&f| {
                let row = table.aggregates_for(f, key).next().expect("one cell");
                format!("{:.4}", row.mean.unwrap_or(f64::NAN))
            })
            .collect();
        println!("{tau:<4} {}", cols.join("   "));
    }
    for f in Family::ALL {
        let total = table.aggregates_for(f, MetricKey::new(Metric::McTotal)).next().unwrap();
        println!(
            "{f:>8}: total MC {:.3} +- {:.3}",
            total.mean.unwrap_or(f64::NAN),
            total.std_err.unwrap_or(0.0)
        );
    }
    Ok(())
}
