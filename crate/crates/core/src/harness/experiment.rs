use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::config::{ExperimentConfig, Task};
use super::seed::{derive_seed, input_seed};
use super::table::{Cell, Metric, MetricKey, ResultTable, TableMeta, TrialRow};
use crate::error::{Error, Result};
use crate::metrics::{capacity, nmse, nmse_conventional};
use crate::readout::{LeastSquares, SolverOptions};
use crate::reservoir::{generate_weights, run_reservoir, ReservoirSpec, Trajectory};
use crate::tasks::{
    delay_target, legendre_target, lorenz, mackey_glass, read_series_csv, rescale_unit,
    uniform_input,
};

const SEGMENT_TRAIN: u64 = 0;
const SEGMENT_TEST: u64 = 1;

/// One trial's values in the order of the experiment's key list, plus the
/// conventional NMSE where it applies.
pub type TrialValues = Vec<(f64, Option<f64>)>;

fn meta(cfg: &ExperimentConfig, kind: &str) -> TableMeta {
    TableMeta {
        kind: kind.to_string(),
        task: cfg.task.label().to_string(),
        config_hash: cfg.hash(),
        master_seed: cfg.master_seed,
        library_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn build_spec(cfg: &ExperimentConfig, cell: &Cell, trial: usize, input_dim: usize) -> Result<ReservoirSpec> {
    let seed = derive_seed(
        cfg.master_seed,
        cell.family,
        (cell.omega_index, cell.lambda_index),
        trial,
    );
    let weights = generate_weights(
        cfg.reservoir_size,
        input_dim,
        cell.lambda,
        cell.omega,
        seed,
    )?;
    Ok(ReservoirSpec::new(cell.family, weights).with_input_floor(Some(cfg.epsilon)))
}

/// Runs every (cell, trial) work item in parallel and lays the results out
/// cell by cell, key by key, trial by trial.
fn collect_rows<F>(cfg: &ExperimentConfig, cells: &[Cell], keys: &[MetricKey], work: F) -> Vec<TrialRow>
where
    F: Fn(&Cell, usize) -> Result<TrialValues> + Sync,
{
    let items: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let results: Vec<Option<TrialValues>> = items
        .par_iter()
        .map(|&(c, t)| {
            work(&cells[c], t)
                .ok()
                .filter(|v| v.len() == keys.len() && v.iter().all(|(x, _)| x.is_finite()))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len() * keys.len());
    for (c, cell) in cells.iter().enumerate() {
        let trials = &results[c * cfg.trials..(c + 1) * cfg.trials];
        for (k, key) in keys.iter().enumerate() {
            for (trial, values) in trials.iter().enumerate() {
                let (value, conventional) = match values {
                    Some(v) => (Some(v[k].0), v[k].1),
                    None => (None, None),
                };
                rows.push(TrialRow {
                    cell: *cell,
                    key: *key,
                    trial,
                    value,
                    conventional,
                });
            }
        }
    }
    rows
}

/// Keys reported by a capacity experiment: one `mc` per delay followed by the
/// `mc_total`, repeated per Legendre order for the `legendre` task.
pub fn capacity_keys(cfg: &ExperimentConfig) -> Vec<MetricKey> {
    let orders: Vec<Option<u32>> = match cfg.task {
        Task::Legendre => cfg.orders.iter().map(|&n| Some(n)).collect(),
        _ => vec![None],
    };
    let mut keys = Vec::new();
    for order in orders {
        for tau in cfg.tau_min..=cfg.tau_max {
            keys.push(MetricKey::new(Metric::Mc).order(order).tau(tau));
        }
        keys.push(MetricKey::new(Metric::McTotal).order(order));
    }
    keys
}

/// Fits the delay targets on a training input and scores them on a separate
/// evaluation input, restarting the reservoir from its initial state.
///
/// Trajectory row `r` holds the state after consuming input `washout + r`;
/// delay `tau` pairs it with input `washout + r + 1 - tau`, so delay 1 is the
/// input just consumed. Every delay uses the same rows, starting at the first
/// one for which the largest delay has a target.
pub fn capacity_trial(
    spec: &ReservoirSpec,
    cfg: &ExperimentConfig,
    u_train: &[f64],
    u_test: &[f64],
) -> Result<TrialValues> {
    let options = SolverOptions {
        rcond: cfg.rcond,
        ridge: cfg.ridge,
    };
    let train = run_reservoir(spec, &DMatrix::from_column_slice(u_train.len(), 1, u_train), cfg.washout)?;
    let test = run_reservoir(spec, &DMatrix::from_column_slice(u_test.len(), 1, u_test), cfg.washout)?;

    let first = cfg.washout.max(cfg.tau_max - 1);
    let train_rows = train.slice(first - cfg.washout, u_train.len() - first)?;
    let test_rows = test.slice(first - cfg.washout, u_test.len() - first)?;
    let solver = LeastSquares::new(&train_rows.augmented(), options)?;
    let test_design = test_rows.augmented();

    let window = |u: &[f64], order: Option<u32>, tau: usize| -> Result<Vec<f64>> {
        let target = match order {
            Some(n) => legendre_target(u, n, tau - 1)?,
            None => delay_target(u, tau - 1)?,
        };
        Ok(target.values[first - target.start..].to_vec())
    };

    let mut out = Vec::new();
    for key in capacity_keys(cfg) {
        match key.metric {
            Metric::Mc => {
                let tau = key.tau.expect("mc keys carry a delay");
                let psi = solver.solve(&DVector::from_vec(window(u_train, key.order, tau)?))?;
                let y = &test_design * psi;
                let c = capacity(y.as_slice(), &window(u_test, key.order, tau)?)?;
                out.push((c.value, None));
            }
            _ => {
                let start = out.len() - (cfg.tau_max + 1 - cfg.tau_min);
                let total = out[start..].iter().map(|(v, _)| v).sum();
                out.push((total, None));
            }
        }
    }
    Ok(out)
}

/// Memory or Legendre capacity over the full (family, omega, lambda, trial) grid.
pub fn run_capacity_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    if !cfg.task.is_capacity() {
        return Err(Error::Config(format!("{} is not a capacity task", cfg.task)));
    }
    let cells = Cell::grid(cfg);
    let keys = capacity_keys(cfg);
    let inputs: Vec<(Vec<f64>, Vec<f64>)> = (0..cfg.trials)
        .map(|t| {
            Ok((
                uniform_input(cfg.train_len, input_seed(cfg.master_seed, t, SEGMENT_TRAIN))?,
                uniform_input(cfg.test_len, input_seed(cfg.master_seed, t, SEGMENT_TEST))?,
            ))
        })
        .collect::<Result<_>>()?;
    let rows = collect_rows(cfg, &cells, &keys, |cell, trial| {
        let spec = build_spec(cfg, cell, trial, 1)?;
        let (train, test) = &inputs[trial];
        capacity_trial(&spec, cfg, train, test)
    });
    Ok(ResultTable::from_trials(meta(cfg, "capacity"), rows))
}

/// The chaotic series for a prediction task, rescaled per column onto
/// `[epsilon, 1]`. Long enough for the training and test segments plus the
/// largest horizon.
pub fn prediction_series(cfg: &ExperimentConfig) -> Result<DMatrix<f64>> {
    let needed = cfg.train_len + cfg.test_len + cfg.max_horizon();
    let raw = match (&cfg.series_path, cfg.task) {
        (Some(path), _) => {
            let (_, m) = read_series_csv(path)?;
            if m.nrows() < needed {
                return Err(Error::Config(format!(
                    "{} holds {} samples, the experiment needs {needed}",
                    path.display(),
                    m.nrows()
                )));
            }
            m.rows(0, needed).into_owned()
        }
        (None, Task::MackeyGlass) => {
            let s = mackey_glass(needed, &cfg.mackey_glass, cfg.mackey_glass_warmup)?;
            DMatrix::from_vec(needed, 1, s)
        }
        (None, Task::Lorenz) => lorenz(needed, &cfg.lorenz)?,
        (None, task) => {
            return Err(Error::Config(format!("{task} is not a prediction task")));
        }
    };
    Ok(rescale_unit(&raw, cfg.epsilon)?.0)
}

/// Keys reported by a prediction experiment: per horizon, one `nmse` per
/// output variable followed by their sum `nmse_tot`.
pub fn prediction_keys(horizons: &[usize], outputs: usize) -> Vec<MetricKey> {
    let mut keys = Vec::new();
    for &h in horizons {
        for k in 0..outputs {
            keys.push(MetricKey::new(Metric::Nmse).tau(h).output(k));
        }
        keys.push(MetricKey::new(Metric::NmseTot).tau(h));
    }
    keys
}

/// Trains on series rows `[0, train_len)` and tests on the next `test_len`
/// rows, restarting from the initial state. For horizon `h` the target of
/// input row `s` is series row `s + h`. One readout is fitted per horizon and
/// output from a single factorisation of the training states.
pub fn prediction_trial(
    spec: &ReservoirSpec,
    cfg: &ExperimentConfig,
    series: &DMatrix<f64>,
    horizons: &[usize],
) -> Result<TrialValues> {
    let options = SolverOptions {
        rcond: cfg.rcond,
        ridge: cfg.ridge,
    };
    let (n_train, n_test, w) = (cfg.train_len, cfg.test_len, cfg.washout);
    let train_in = series.rows(0, n_train).into_owned();
    let test_in = series.rows(n_train, n_test).into_owned();
    let train: Trajectory = run_reservoir(spec, &train_in, w)?;
    let test: Trajectory = run_reservoir(spec, &test_in, w)?;
    let solver = LeastSquares::new(&train.augmented(), options)?;
    let test_design = test.augmented();

    let mut out = Vec::new();
    for &h in horizons {
        let (mut tot, mut tot_conv) = (0.0, 0.0);
        for k in 0..series.ncols() {
            let y_train: Vec<f64> = (w..n_train).map(|s| series[(s + h, k)]).collect();
            let y_test: Vec<f64> = (w..n_test).map(|s| series[(n_train + s + h, k)]).collect();
            let psi = solver.solve(&DVector::from_vec(y_train))?;
            let y = &test_design * psi;
            let e = nmse(y.as_slice(), &y_test)?;
            let c = nmse_conventional(y.as_slice(), &y_test)?;
            tot += e;
            tot_conv += c;
            out.push((e, Some(c)));
        }
        out.push((tot, Some(tot_conv)));
    }
    Ok(out)
}

fn run_prediction_cells(
    cfg: &ExperimentConfig,
    cells: &[Cell],
    series: &DMatrix<f64>,
    kind: &str,
) -> ResultTable {
    let keys = prediction_keys(&cfg.horizons, series.ncols());
    let rows = collect_rows(cfg, cells, &keys, |cell, trial| {
        let spec = build_spec(cfg, cell, trial, series.ncols())?;
        prediction_trial(&spec, cfg, series, &cfg.horizons)
    });
    ResultTable::from_trials(meta(cfg, kind), rows)
}

fn check_prediction(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.task.is_capacity() {
        return Err(Error::Config(format!("{} is not a prediction task", cfg.task)));
    }
    Ok(())
}

/// Mackey-Glass or Lorenz prediction over the full grid at every configured
/// horizon. The series is generated once and shared by all cells and trials.
pub fn run_prediction_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    check_prediction(cfg)?;
    let series = prediction_series(cfg)?;
    Ok(run_prediction_cells(cfg, &Cell::grid(cfg), &series, "predict"))
}

/// Multi-step prediction: for each family, picks the grid cell with the lowest
/// one-step `nmse_tot` (skipped when the grid has a single cell), then sweeps
/// the configured horizons at that cell.
pub fn run_multistep_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    check_prediction(cfg)?;
    let series = prediction_series(cfg)?;
    let grid = Cell::grid(cfg);
    let single = cfg.omega_grid.len() * cfg.lambda_grid.len() == 1;

    let chosen: Vec<Cell> = if single {
        grid
    } else {
        let search_cfg = ExperimentConfig {
            horizons: vec![1],
            ..cfg.clone()
        };
        let search = run_prediction_cells(&search_cfg, &grid, &series, "search");
        let key = MetricKey::new(Metric::NmseTot).tau(1);
        let mut chosen = Vec::new();
        for &family in &cfg.families {
            // all-failed families fall back to their first cell
            let best = search.best(family, key);
            let cell = grid
                .iter()
                .find(|c| {
                    c.family == family
                        && best.is_none_or(|b| b.omega == c.omega && b.lambda == c.lambda)
                })
                .copied()
                .expect("every family has grid cells");
            chosen.push(cell);
        }
        chosen
    };
    Ok(run_prediction_cells(cfg, &chosen, &series, "multistep"))
}

/// Dispatches on the task: capacity tasks to [`run_capacity_experiment`],
/// chaotic series to [`run_prediction_experiment`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.task.is_capacity() {
        run_capacity_experiment(cfg)
    } else {
        run_prediction_experiment(cfg)
    }
}
