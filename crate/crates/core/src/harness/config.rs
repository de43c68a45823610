use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::readout::DEFAULT_RCOND;
use crate::reservoir::Family;
use crate::tasks::{LorenzParams, MackeyGlassParams, MAX_LEGENDRE_ORDER};
use crate::DEFAULT_EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Linear memory capacity: delayed copies of a uniform input.
    Memory,
    /// Nonlinear capacity: Legendre polynomials of delayed inputs.
    Legendre,
    MackeyGlass,
    Lorenz,
}

impl Task {
    pub fn label(self) -> &'static str {
        match self {
            Task::Memory => "memory",
            Task::Legendre => "legendre",
            Task::MackeyGlass => "mackey_glass",
            Task::Lorenz => "lorenz",
        }
    }

    pub fn is_capacity(self) -> bool {
        matches!(self, Task::Memory | Task::Legendre)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

/// Everything an experiment run depends on. Loaded from a TOML file; missing
/// keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    pub families: Vec<Family>,
    /// Number of reservoir nodes N.
    pub reservoir_size: usize,
    pub train_len: usize,
    pub test_len: usize,
    /// Leading states dropped from both training and evaluation runs.
    pub washout: usize,
    /// Delay range for capacity tasks; delay 1 is the most recent input.
    pub tau_min: usize,
    pub tau_max: usize,
    /// Legendre orders evaluated by the `legendre` task.
    pub orders: Vec<u32>,
    pub omega_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Prediction horizons, in integration steps.
    pub horizons: Vec<usize>,
    /// Lower clamp for product-reservoir inputs and rescaled series.
    pub epsilon: f64,
    pub rcond: f64,
    pub ridge: f64,
    pub mackey_glass: MackeyGlassParams,
    pub mackey_glass_warmup: usize,
    pub lorenz: LorenzParams,
    /// Read the chaotic series from this CSV instead of integrating it.
    pub series_path: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: Task::Memory,
            families: Family::ALL.to_vec(),
            reservoir_size: 20,
            train_len: 2000,
            test_len: 2000,
            washout: 0,
            tau_min: 1,
            tau_max: 50,
            orders: (2..=8).collect(),
            omega_grid: capacity_omega_grid(),
            lambda_grid: capacity_lambda_grid(),
            trials: 50,
            master_seed: 0,
            horizons: vec![1],
            epsilon: DEFAULT_EPSILON,
            rcond: DEFAULT_RCOND,
            ridge: 0.0,
            mackey_glass: MackeyGlassParams::default(),
            mackey_glass_warmup: 1000,
            lorenz: LorenzParams::default(),
            series_path: None,
            out_dir: PathBuf::from("results"),
        }
    }
}

/// Input scales spanning 0.001 < omega < 1, log-spaced.
pub fn capacity_omega_grid() -> Vec<f64> {
    vec![0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 0.9]
}

/// Spectral radii spanning 0.01 < lambda <= 0.95.
pub fn capacity_lambda_grid() -> Vec<f64> {
    vec![0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95]
}

/// 0.1 <= omega <= 1 in steps of 0.1.
pub fn prediction_omega_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// 0.1 <= lambda <= 0.9 in steps of 0.1.
pub fn prediction_lambda_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Checks ranges and internal consistency.
    ///
    /// Documented ranges: `0 < omega <= 1`, `0 < lambda < 1`, `trials >= 1`,
    /// `1 <= tau_min <= tau_max`, Legendre orders `<= 20`, horizons `>= 1`,
    /// `0 <= epsilon < 1`.
    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(invalid("at least one reservoir family is required"));
        }
        let mut families = self.families.clone();
        families.sort();
        families.dedup();
        if families.len() != self.families.len() {
            return Err(invalid("families must not repeat"));
        }
        if self.reservoir_size == 0 {
            return Err(invalid("reservoir_size must be positive"));
        }
        if self.omega_grid.is_empty() || self.lambda_grid.is_empty() {
            return Err(invalid("omega_grid and lambda_grid must be nonempty"));
        }
        if let Some(w) = self.omega_grid.iter().find(|w| !(**w > 0.0 && **w <= 1.0)) {
            return Err(invalid(format!("omega {w} outside (0, 1]")));
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            return Err(invalid(format!("lambda {l} outside (0, 1)")));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon must lie in [0, 1)"));
        }
        if !(self.rcond >= 0.0) || !(self.ridge >= 0.0) {
            return Err(invalid("rcond and ridge must be non-negative"));
        }
        if self.train_len <= self.washout || self.test_len <= self.washout {
            return Err(invalid("train_len and test_len must exceed washout"));
        }
        if self.task.is_capacity() {
            if self.tau_min == 0 || self.tau_min > self.tau_max {
                return Err(invalid("delays need 1 <= tau_min <= tau_max"));
            }
            // the largest delay must leave at least two training rows
            if self.tau_max + 1 > self.train_len.min(self.test_len) {
                return Err(invalid("tau_max is too large for the segment lengths"));
            }
            if self.task == Task::Legendre {
                if self.orders.is_empty() {
                    return Err(invalid("the legendre task needs at least one order"));
                }
                if let Some(n) = self.orders.iter().find(|n| **n > MAX_LEGENDRE_ORDER) {
                    return Err(invalid(format!("Legendre order {n} exceeds {MAX_LEGENDRE_ORDER}")));
                }
            }
        } else {
            if self.horizons.is_empty() {
                return Err(invalid("at least one prediction horizon is required"));
            }
            if self.horizons.contains(&0) {
                return Err(invalid("prediction horizons must be at least 1"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, ignoring `out_dir`.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out_dir = PathBuf::new();
        let json = serde_json::to_vec(&canonical).expect("config serialises");
        hex::encode(Sha256::digest(&json))
    }

    /// First 16 hex digits of [`hash`](Self::hash), used in file names.
    pub fn short_hash(&self) -> String {
        self.hash()[..16].to_string()
    }

    pub fn max_horizon(&self) -> usize {
        self.horizons.iter().copied().max().unwrap_or(0)
    }
}
