//! Runs a config file and writes the aggregate CSV, per-trial CSV and JSON
//! summary, as the `prodres` command does.
//!
//!     cargo run --release --example sweep_to_files -- configs/quick.toml

use std::path::PathBuf;

use prodres::harness::{emit_results, run_experiment, ExperimentConfig, OutputFormat};

fn main() -> prodres::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from);
    let cfg = match path {
        Some(p) => ExperimentConfig::load(&p)?,
        None => ExperimentConfig::from_toml_str(include_str!("../configs/quick.toml"))?,
    };
    let table = run_experiment(&cfg)?;
    for file in emit_results(&table, &cfg, &cfg.out_dir, OutputFormat::Csv)? {
        println!("{}", file.display());
    }
    for f in table.families() {
        let failed = table.trials.iter().filter(|t| t.cell.family == f && t.value.is_none()).count();
        println!("{f}: {failed} failed trial values");
    }
    Ok(())
}
