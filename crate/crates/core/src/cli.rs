//! Command-line front end. The `prodres` binary only calls [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::harness::{
    emit_results, run_capacity_experiment, run_multistep_experiment, run_prediction_experiment,
    ExperimentConfig, OutputFormat, ResultTable,
};
use crate::reservoir::{esp_divergence, generate_weights, Family, ReservoirSpec, ReservoirState};
use crate::tasks::{lorenz, mackey_glass, uniform_input, write_series_csv};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_DIVERGED: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "prodres", version, about = "Product reservoir benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Memory or Legendre capacity over the (omega, lambda) grid.
    Capacity(RunArgs),
    /// One-step (or fixed-horizon) chaotic series prediction over the grid.
    Predict(RunArgs),
    /// Horizon sweep at each family's best one-step cell.
    Multistep(RunArgs),
    /// Integrate a chaotic system and write it as CSV.
    Generate(GenerateArgs),
    /// Print the distance between two runs from different initial states.
    EspCheck(EspArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML experiment config; omitted keys take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding `out_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Worker threads (default: all cores).
    #[arg(long, env = "PRODRES_THREADS")]
    pub threads: Option<usize>,
    /// Overrides `master_seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum System {
    MackeyGlass,
    Lorenz,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub system: System,
    /// Samples to write, one per integration step.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Config supplying the integrator parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EspArgs {
    #[arg(long, default_value = "product")]
    pub family: Family,
    #[arg(long, default_value_t = 20)]
    pub size: usize,
    #[arg(long, default_value_t = 0.9)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.2)]
    pub omega: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Divergence { .. } => EXIT_DIVERGED,
        _ => EXIT_VALIDATION,
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn run_experiment_command(
    args: &RunArgs,
    run: fn(&ExperimentConfig) -> Result<ResultTable>,
    expect_capacity: bool,
) -> Result<u8> {
    let mut cfg = load_config(args.config.as_ref())?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    if cfg.task.is_capacity() != expect_capacity {
        return Err(Error::Config(format!(
            "task `{}` does not fit this subcommand",
            cfg.task
        )));
    }
    if args.threads == Some(0) {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let table = pool.install(|| run(&cfg))?;
    for path in emit_results(&table, &cfg, &cfg.out_dir, args.format.into())? {
        println!("{}", path.display());
    }
    let dead: Vec<_> = table.dead_cells().collect();
    if dead.is_empty() {
        return Ok(0);
    }
    let mut cells: Vec<(Family, f64, f64)> = dead.iter().map(|a| (a.family, a.omega, a.lambda)).collect();
    cells.dedup();
    for (family, omega, lambda) in cells {
        eprintln!("all trials diverged: {family} omega={omega} lambda={lambda}");
    }
    Ok(EXIT_DIVERGED)
}

fn generate(args: &GenerateArgs) -> Result<u8> {
    let cfg = load_config(args.config.as_ref())?;
    if args.steps == 0 {
        return Err(Error::Config("--steps must be positive".into()));
    }
    match args.system {
        System::MackeyGlass => {
            let s = mackey_glass(args.steps, &cfg.mackey_glass, cfg.mackey_glass_warmup)?;
            write_series_csv(&args.out, &["x"], &DMatrix::from_vec(s.len(), 1, s))?;
        }
        System::Lorenz => {
            write_series_csv(&args.out, &["x", "y", "z"], &lorenz(args.steps, &cfg.lorenz)?)?;
        }
    }
    println!("{}", args.out.display());
    Ok(0)
}

fn esp_check(args: &EspArgs) -> Result<u8> {
    let w = generate_weights(args.size, 1, args.lambda, args.omega, args.seed)?;
    let spec = ReservoirSpec::new(args.family, w);
    let u = uniform_input(args.steps, args.seed.wrapping_add(1))?;
    let inits = uniform_input(2 * args.size, args.seed.wrapping_add(2))?;
    let a = ReservoirState::from_slice(&inits[..args.size])?;
    let b = ReservoirState::from_slice(&inits[args.size..])?;
    let d = esp_divergence(&spec, &DMatrix::from_vec(args.steps, 1, u), a, b)?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "t,distance");
    for (t, v) in d.iter().enumerate() {
        let _ = writeln!(out, "{},{}", t + 1, crate::format::format_g17(*v));
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
///
/// Exit codes: 0 success, 1 invalid or unparsable configuration or arguments,
/// 2 some grid cell diverged in every trial, 3 I/O failure.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Capacity(a) => run_experiment_command(a, run_capacity_experiment, true),
        Command::Predict(a) => run_experiment_command(a, run_prediction_experiment, false),
        Command::Multistep(a) => run_experiment_command(a, run_multistep_experiment, false),
        Command::Generate(a) => generate(a),
        Command::EspCheck(a) => esp_check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_VALIDATION);
        let io = Error::Io {
            path: "p".into(),
            source: std::io::Error::other("x"),
        };
        assert_eq!(exit_code(&io), EXIT_IO);
        assert_eq!(exit_code(&Error::Divergence { step: 3 }), EXIT_DIVERGED);
    }

    #[test]
    fn parses_every_subcommand() {
        for argv in [
            vec!["prodres", "capacity", "--config", "c.toml", "--threads", "2", "--seed", "5"],
            vec!["prodres", "predict", "--out", "o", "--format", "json"],
            vec!["prodres", "multistep"],
            vec!["prodres", "generate", "--system", "lorenz", "--out", "l.csv"],
            vec!["prodres", "esp-check", "--lambda", "0.5"],
        ] {
            Cli::try_parse_from(&argv).unwrap();
        }
        assert!(Cli::try_parse_from(["prodres", "esp-check", "--family", "cubic"]).is_err());
    }
}
