use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::reservoir::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Capacity at one delay.
    Mc,
    /// Capacity summed over the configured delays.
    McTotal,
    /// NMSE of one output variable.
    Nmse,
    /// NMSE summed over output variables.
    NmseTot,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Mc => "mc",
            Metric::McTotal => "mc_total",
            Metric::Nmse => "nmse",
            Metric::NmseTot => "nmse_tot",
        }
    }

    /// Whether larger values are better.
    pub fn maximise(self) -> bool {
        matches!(self, Metric::Mc | Metric::McTotal)
    }

    pub fn is_error(self) -> bool {
        !self.maximise()
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Metric::Mc),
            "mc_total" => Ok(Metric::McTotal),
            "nmse" => Ok(Metric::Nmse),
            "nmse_tot" => Ok(Metric::NmseTot),
            other => Err(Error::InvalidArgument(format!("unknown metric `{other}`"))),
        }
    }
}

/// Identifies one measured quantity within a cell. `order` is the Legendre
/// order (absent for the memory task), `tau` the delay or prediction horizon,
/// `output` the predicted variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MetricKey {
    pub metric: Metric,
    pub order: Option<u32>,
    pub tau: Option<usize>,
    pub output: Option<usize>,
}

impl MetricKey {
    pub fn new(metric: Metric) -> Self {
        Self {
            metric,
            order: None,
            tau: None,
            output: None,
        }
    }

    pub fn order(mut self, order: Option<u32>) -> Self {
        self.order = order;
        self
    }

    pub fn tau(mut self, tau: usize) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn output(mut self, output: usize) -> Self {
        self.output = Some(output);
        self
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub family: Family,
    pub omega_index: usize,
    pub lambda_index: usize,
    pub omega: f64,
    pub lambda: f64,
}

impl Cell {
    /// All cells of the config's grid, family-major, then omega, then lambda.
    pub fn grid(cfg: &ExperimentConfig) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &family in &cfg.families {
            for (i, &omega) in cfg.omega_grid.iter().enumerate() {
                for (j, &lambda) in cfg.lambda_grid.iter().enumerate() {
                    cells.push(Cell {
                        family,
                        omega_index: i,
                        lambda_index: j,
                        omega,
                        lambda,
                    });
                }
            }
        }
        cells
    }
}

/// A single trial's value; `value` is `None` when the trial failed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub cell: Cell,
    pub key: MetricKey,
    pub trial: usize,
    pub value: Option<f64>,
    /// The `MSE / Var` variant for error metrics.
    pub conventional: Option<f64>,
}

/// Mean over the non-failed trials of a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub family: Family,
    pub omega: f64,
    pub lambda: f64,
    pub key: MetricKey,
    pub trials: usize,
    pub failed: usize,
    pub mean: Option<f64>,
    pub std_err: Option<f64>,
    pub log10_mean: Option<f64>,
    pub conventional_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    /// `capacity`, `predict` or `multistep`.
    pub kind: String,
    pub task: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub library_version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub meta: TableMeta,
    pub trials: Vec<TrialRow>,
    pub aggregates: Vec<AggregateRow>,
}

fn mean_of(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn std_err_of(values: &[f64], mean: f64) -> Option<f64> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some((var / n as f64).sqrt())
}

fn aggregate_group(rows: &[&TrialRow]) -> AggregateRow {
    let first = rows[0];
    let ok: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
    let conv: Vec<f64> = rows.iter().filter_map(|r| r.conventional).collect();
    let mean = mean_of(&ok);
    let log10_mean = match mean {
        Some(m) if first.key.metric.is_error() && m > 0.0 => Some(m.log10()),
        _ => None,
    };
    AggregateRow {
        family: first.cell.family,
        omega: first.cell.omega,
        lambda: first.cell.lambda,
        key: first.key,
        trials: ok.len(),
        failed: rows.len() - ok.len(),
        mean,
        std_err: mean.and_then(|m| std_err_of(&ok, m)),
        log10_mean,
        conventional_mean: mean_of(&conv),
    }
}

impl ResultTable {
    /// Builds aggregates from trial rows. Rows must be grouped by cell and key
    /// with trials contiguous, which is how the experiment runners emit them.
    pub fn from_trials(meta: TableMeta, trials: Vec<TrialRow>) -> Self {
        let mut aggregates = Vec::new();
        let mut start = 0;
        while start < trials.len() {
            let head = &trials[start];
            let mut end = start + 1;
            while end < trials.len()
                && trials[end].cell == head.cell
                && trials[end].key == head.key
            {
                end += 1;
            }
            let group: Vec<&TrialRow> = trials[start..end].iter().collect();
            aggregates.push(aggregate_group(&group));
            start = end;
        }
        Self {
            meta,
            trials,
            aggregates,
        }
    }

    /// Recomputes every aggregate from the trial rows and compares.
    pub fn check_consistency(&self) -> Result<()> {
        let rebuilt = ResultTable::from_trials(self.meta.clone(), self.trials.clone());
        if rebuilt.aggregates.len() != self.aggregates.len() {
            return Err(Error::InvalidArgument(
                "aggregate rows do not match the trial rows".into(),
            ));
        }
        for (a, b) in rebuilt.aggregates.iter().zip(&self.aggregates) {
            let same_mean = match (a.mean, b.mean) {
                (Some(x), Some(y)) => (x - y).abs() <= 1e-12 * x.abs().max(1.0),
                (None, None) => true,
                _ => false,
            };
            if a.key != b.key || a.trials != b.trials || a.failed != b.failed || !same_mean {
                return Err(Error::InvalidArgument(format!(
                    "aggregate for {} omega={} lambda={} {:?} disagrees with its trials",
                    b.family, b.omega, b.lambda, b.key
                )));
            }
        }
        Ok(())
    }

    /// Aggregate rows whose every trial failed.
    pub fn dead_cells(&self) -> impl Iterator<Item = &AggregateRow> {
        self.aggregates.iter().filter(|a| a.trials == 0)
    }

    pub fn aggregates_for(&self, family: Family, key: MetricKey) -> impl Iterator<Item = &AggregateRow> {
        self.aggregates
            .iter()
            .filter(move |a| a.family == family && a.key == key)
    }

    /// Best aggregate (largest capacity or smallest error) for a family and key.
    pub fn best(&self, family: Family, key: MetricKey) -> Option<&AggregateRow> {
        let better = |a: f64, b: f64| if key.metric.maximise() { a > b } else { a < b };
        let mut best: Option<&AggregateRow> = None;
        for row in self.aggregates_for(family, key) {
            let Some(m) = row.mean else { continue };
            match best {
                Some(b) if !better(m, b.mean.unwrap()) => {}
                _ => best = Some(row),
            }
        }
        best
    }

    /// Distinct metric keys in first-appearance order.
    pub fn keys(&self) -> Vec<MetricKey> {
        let mut keys = Vec::new();
        for a in &self.aggregates {
            if !keys.contains(&a.key) {
                keys.push(a.key);
            }
        }
        keys
    }

    /// Distinct families in first-appearance order.
    pub fn families(&self) -> Vec<Family> {
        let mut out = Vec::new();
        for a in &self.aggregates {
            if !out.contains(&a.family) {
                out.push(a.family);
            }
        }
        out
    }
}
