//! Configuration-driven experiments over (omega, lambda) grids.

mod config;
mod emit;
mod experiment;
mod seed;
mod table;

pub use config::{
    capacity_lambda_grid, capacity_omega_grid, prediction_lambda_grid, prediction_omega_grid,
    ExperimentConfig, Task,
};
pub use emit::{
    emit_results, file_stem, read_aggregates, read_trials, write_aggregates, write_trials,
    FailureCount, Optimum, OutputFormat, Summary, AGGREGATE_HEADER, TRIAL_HEADER,
};
pub use experiment::{
    capacity_keys, capacity_trial, prediction_keys, prediction_series, prediction_trial,
    run_capacity_experiment, run_experiment, run_multistep_experiment, run_prediction_experiment,
    TrialValues,
};
pub use seed::{derive_seed, input_seed};
pub use table::{AggregateRow, Cell, Metric, MetricKey, ResultTable, TableMeta, TrialRow};
