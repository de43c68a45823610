use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::table::{AggregateRow, Cell, MetricKey, ResultTable, TableMeta, TrialRow};
use crate::error::{Error, Result};
use crate::format::format_g17;
use crate::reservoir::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// Aggregate and per-trial CSV tables plus a JSON summary.
    #[default]
    Csv,
    /// A single JSON document with summary, aggregates and trials.
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format `{other}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub const AGGREGATE_HEADER: [&str; 13] = [
    "family",
    "omega",
    "lambda",
    "metric",
    "order",
    "tau",
    "output",
    "trials",
    "failed",
    "mean",
    "std_err",
    "log10_mean",
    "conventional_mean",
];

pub const TRIAL_HEADER: [&str; 12] = [
    "family",
    "omega_index",
    "lambda_index",
    "omega",
    "lambda",
    "metric",
    "order",
    "tau",
    "output",
    "trial",
    "value",
    "conventional",
];

fn opt_f(v: Option<f64>) -> String {
    v.map(format_g17).unwrap_or_default()
}

fn opt_u<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn key_fields(key: &MetricKey) -> [String; 4] {
    [
        key.metric.label().to_string(),
        opt_u(key.order),
        opt_u(key.tau),
        opt_u(key.output),
    ]
}

pub fn write_aggregates<W: Write>(writer: W, rows: &[AggregateRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        let [metric, order, tau, output] = key_fields(&r.key);
        w.write_record([
            r.family.label().to_string(),
            format_g17(r.omega),
            format_g17(r.lambda),
            metric,
            order,
            tau,
            output,
            r.trials.to_string(),
            r.failed.to_string(),
            opt_f(r.mean),
            opt_f(r.std_err),
            opt_f(r.log10_mean),
            opt_f(r.conventional_mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trials<W: Write>(writer: W, rows: &[TrialRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRIAL_HEADER)?;
    for r in rows {
        let [metric, order, tau, output] = key_fields(&r.key);
        w.write_record([
            r.cell.family.label().to_string(),
            r.cell.omega_index.to_string(),
            r.cell.lambda_index.to_string(),
            format_g17(r.cell.omega),
            format_g17(r.cell.lambda),
            metric,
            order,
            tau,
            output,
            r.trial.to_string(),
            opt_f(r.value),
            opt_f(r.conventional),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse<T: FromStr>(field: &str, name: &str) -> std::result::Result<T, String> {
    field
        .parse()
        .map_err(|_| format!("bad {name} `{field}`"))
}

fn parse_opt<T: FromStr>(field: &str, name: &str) -> std::result::Result<Option<T>, String> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse(field, name).map(Some)
    }
}

fn parse_key(f: &[&str]) -> std::result::Result<MetricKey, String> {
    Ok(MetricKey {
        metric: f[0].parse().map_err(|e: Error| e.to_string())?,
        order: parse_opt(f[1], "order")?,
        tau: parse_opt(f[2], "tau")?,
        output: parse_opt(f[3], "output")?,
    })
}

fn records<R: Read>(reader: R, header: &[&str]) -> std::result::Result<Vec<csv::StringRecord>, String> {
    let mut r = csv::Reader::from_reader(reader);
    let found = r.headers().map_err(|e| e.to_string())?;
    if found.iter().ne(header.iter().copied()) {
        return Err(format!("unexpected header {found:?}"));
    }
    r.records()
        .map(|rec| rec.map_err(|e| e.to_string()))
        .collect()
}

/// Parses a table written by [`write_aggregates`].
pub fn read_aggregates<R: Read>(reader: R) -> std::result::Result<Vec<AggregateRow>, String> {
    records(reader, &AGGREGATE_HEADER)?
        .iter()
        .map(|rec| {
            let f: Vec<&str> = rec.iter().collect();
            Ok(AggregateRow {
                family: parse::<Family>(f[0], "family")?,
                omega: parse(f[1], "omega")?,
                lambda: parse(f[2], "lambda")?,
                key: parse_key(&f[3..7])?,
                trials: parse(f[7], "trials")?,
                failed: parse(f[8], "failed")?,
                mean: parse_opt(f[9], "mean")?,
                std_err: parse_opt(f[10], "std_err")?,
                log10_mean: parse_opt(f[11], "log10_mean")?,
                conventional_mean: parse_opt(f[12], "conventional_mean")?,
            })
        })
        .collect()
}

/// Parses a table written by [`write_trials`].
pub fn read_trials<R: Read>(reader: R) -> std::result::Result<Vec<TrialRow>, String> {
    records(reader, &TRIAL_HEADER)?
        .iter()
        .map(|rec| {
            let f: Vec<&str> = rec.iter().collect();
            Ok(TrialRow {
                cell: Cell {
                    family: parse::<Family>(f[0], "family")?,
                    omega_index: parse(f[1], "omega_index")?,
                    lambda_index: parse(f[2], "lambda_index")?,
                    omega: parse(f[3], "omega")?,
                    lambda: parse(f[4], "lambda")?,
                },
                key: parse_key(&f[5..9])?,
                trial: parse(f[9], "trial")?,
                value: parse_opt(f[10], "value")?,
                conventional: parse_opt(f[11], "conventional")?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub family: Family,
    pub key: MetricKey,
    pub omega: f64,
    pub lambda: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureCount {
    pub family: Family,
    /// Failed (cell, trial) runs.
    pub failed_trials: usize,
    /// Cells in which every trial failed.
    pub dead_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub meta: TableMeta,
    pub config: ExperimentConfig,
    pub optima: Vec<Optimum>,
    pub failures: Vec<FailureCount>,
}

impl Summary {
    /// Best cell per family for every total metric (`mc_total`, `nmse_tot`).
    pub fn new(table: &ResultTable, config: &ExperimentConfig) -> Self {
        let mut optima = Vec::new();
        for family in table.families() {
            for key in table.keys() {
                if !matches!(key.metric, super::Metric::McTotal | super::Metric::NmseTot) {
                    continue;
                }
                if let Some(best) = table.best(family, key) {
                    optima.push(Optimum {
                        family,
                        key,
                        omega: best.omega,
                        lambda: best.lambda,
                        mean: best.mean.expect("best rows have a mean"),
                    });
                }
            }
        }
        let failures = table
            .families()
            .into_iter()
            .map(|family| {
                let mut failed = std::collections::BTreeSet::new();
                for r in table.trials.iter().filter(|r| r.cell.family == family && r.value.is_none()) {
                    failed.insert((r.cell.omega_index, r.cell.lambda_index, r.trial));
                }
                let mut dead = std::collections::BTreeSet::new();
                for a in table.dead_cells().filter(|a| a.family == family) {
                    dead.insert((a.omega.to_bits(), a.lambda.to_bits()));
                }
                FailureCount {
                    family,
                    failed_trials: failed.len(),
                    dead_cells: dead.len(),
                }
            })
            .collect();
        Self {
            meta: table.meta.clone(),
            config: config.clone(),
            optima,
            failures,
        }
    }
}

#[derive(Serialize)]
struct JsonAggregate<'a> {
    family: Family,
    omega: f64,
    lambda: f64,
    #[serde(flatten)]
    key: &'a MetricKey,
    trials: usize,
    failed: usize,
    mean: Option<f64>,
    std_err: Option<f64>,
    log10_mean: Option<f64>,
    conventional_mean: Option<f64>,
}

#[derive(Serialize)]
struct JsonTrial<'a> {
    #[serde(flatten)]
    cell: &'a Cell,
    #[serde(flatten)]
    key: &'a MetricKey,
    trial: usize,
    value: Option<f64>,
    conventional: Option<f64>,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    summary: &'a Summary,
    aggregates: Vec<JsonAggregate<'a>>,
    trials: Vec<JsonTrial<'a>>,
}

/// `{kind}-{task}-{hash16}`, shared by every file of one run.
pub fn file_stem(table: &ResultTable) -> String {
    format!(
        "{}-{}-{}",
        table.meta.kind,
        table.meta.task,
        &table.meta.config_hash[..16.min(table.meta.config_hash.len())]
    )
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing CSV to memory cannot fail");
    buf
}

/// Writes the result files into `out_dir` (created if missing) after checking
/// that every aggregate matches its trial rows. Returns the paths written.
///
/// Both formats write the summary to `{stem}.json`. Csv adds `{stem}.csv`
/// (aggregates) and `{stem}-trials.csv`; Json adds `{stem}-results.json`
/// holding summary, aggregates and trials.
pub fn emit_results(
    table: &ResultTable,
    config: &ExperimentConfig,
    out_dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    table.check_consistency()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let stem = file_stem(table);
    let summary = Summary::new(table, config);
    let json_path = out_dir.join(format!("{stem}.json"));
    let mut summary_json = serde_json::to_vec_pretty(&summary).expect("summary serialises");
    summary_json.push(b'\n');

    match format {
        OutputFormat::Csv => {
            let agg_path = out_dir.join(format!("{stem}.csv"));
            let trials_path = out_dir.join(format!("{stem}-trials.csv"));
            write_file(&agg_path, &csv_bytes(|b| write_aggregates(b, &table.aggregates)))?;
            write_file(&trials_path, &csv_bytes(|b| write_trials(b, &table.trials)))?;
            write_file(&json_path, &summary_json)?;
            Ok(vec![agg_path, trials_path, json_path])
        }
        OutputFormat::Json => {
            let doc = JsonDocument {
                summary: &summary,
                aggregates: table
                    .aggregates
                    .iter()
                    .map(|a| JsonAggregate {
                        family: a.family,
                        omega: a.omega,
                        lambda: a.lambda,
                        key: &a.key,
                        trials: a.trials,
                        failed: a.failed,
                        mean: a.mean,
                        std_err: a.std_err,
                        log10_mean: a.log10_mean,
                        conventional_mean: a.conventional_mean,
                    })
                    .collect(),
                trials: table
                    .trials
                    .iter()
                    .map(|t| JsonTrial {
                        cell: &t.cell,
                        key: &t.key,
                        trial: t.trial,
                        value: t.value,
                        conventional: t.conventional,
                    })
                    .collect(),
            };
            let results_path = out_dir.join(format!("{stem}-results.json"));
            let mut json = serde_json::to_vec_pretty(&doc).expect("results serialise");
            json.push(b'\n');
            write_file(&results_path, &json)?;
            write_file(&json_path, &summary_json)?;
            Ok(vec![results_path, json_path])
        }
    }
}
