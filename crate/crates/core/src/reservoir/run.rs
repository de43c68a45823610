use nalgebra::{DMatrix, DVector};

use super::dynamics::{exp_state, log_input, log_state, log_step, step_additive};
use super::state::{Activation, Family, ReservoirSpec, ReservoirState, Trajectory};
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

fn check_inputs<T: Scalar>(spec: &ReservoirSpec, inputs: &DMatrix<T>, washout: usize) -> Result<()> {
    if inputs.ncols() != spec.weights.input_dim() {
        return Err(Error::Dimension(format!(
            "inputs have {} channels, reservoir expects {}",
            inputs.ncols(),
            spec.weights.input_dim()
        )));
    }
    if inputs.nrows() <= washout {
        return Err(Error::InvalidArgument(format!(
            "{} input steps with washout {washout} leave an empty trajectory",
            inputs.nrows()
        )));
    }
    Ok(())
}

fn relabel(step: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Divergence { .. } => Error::Divergence { step },
        Error::NonPositiveInput { value, .. } => Error::NonPositiveInput { index: step, value },
        other => other,
    }
}

/// Drives a real reservoir from its family's initial state (zeros for
/// linear/tanh, ones for product) and records every state after the first
/// `washout` inputs.
///
/// `inputs` holds one row per time step. Product reservoirs clamp inputs to
/// `[input_floor, 1]` when a floor is set.
pub fn run_reservoir(
    spec: &ReservoirSpec,
    inputs: &DMatrix<f64>,
    washout: usize,
) -> Result<Trajectory> {
    run_from(spec, spec.initial_state(), inputs, washout)
}

/// [`run_reservoir`] from an explicit initial state.
pub fn run_from(
    spec: &ReservoirSpec,
    init: ReservoirState<f64>,
    inputs: &DMatrix<f64>,
    washout: usize,
) -> Result<Trajectory> {
    check_inputs(spec, inputs, washout)?;
    if init.len() != spec.size() {
        return Err(Error::Dimension(format!(
            "initial state has {} nodes, reservoir has {}",
            init.len(),
            spec.size()
        )));
    }
    let activation = match spec.family {
        Family::Linear => Activation::Identity,
        Family::Tanh => Activation::Tanh,
        Family::Product => {
            let clamped = match spec.input_floor {
                Some(floor) => inputs.map(|u| u.clamp(floor, 1.0)),
                None => inputs.clone(),
            };
            return run_product(spec, init, &clamped, washout);
        }
    };

    let steps = inputs.nrows();
    let mut states = DMatrix::zeros(steps - washout, spec.size());
    let mut x = init;
    let mut row = vec![0.0; inputs.ncols()];
    for t in 0..steps {
        for (k, r) in row.iter_mut().enumerate() {
            *r = inputs[(t, k)];
        }
        x = step_additive(&x, &row, &spec.weights, activation).map_err(relabel(t))?;
        if t >= washout {
            states.set_row(t - washout, &x.values().transpose());
        }
    }
    Ok(Trajectory::new(states, washout))
}

/// Drives a product reservoir in log space, real or complex. Inputs are used
/// as given; real mode needs them strictly positive.
pub fn run_product<T: Scalar>(
    spec: &ReservoirSpec,
    init: ReservoirState<T>,
    inputs: &DMatrix<T>,
    washout: usize,
) -> Result<Trajectory<T>> {
    if spec.family != Family::Product {
        return Err(Error::InvalidArgument(format!(
            "run_product needs a product reservoir, got {}",
            spec.family
        )));
    }
    check_inputs(spec, inputs, washout)?;
    if init.len() != spec.size() {
        return Err(Error::Dimension(format!(
            "initial state has {} nodes, reservoir has {}",
            init.len(),
            spec.size()
        )));
    }

    let steps = inputs.nrows();
    let mut states = DMatrix::from_element(steps - washout, spec.size(), T::zero());
    let mut log_x: DVector<T> = log_state(&init)?;
    let mut row = vec![T::zero(); inputs.ncols()];
    for t in 0..steps {
        for (k, r) in row.iter_mut().enumerate() {
            *r = inputs[(t, k)];
        }
        let log_u = log_input(&row).map_err(relabel(t))?;
        log_x = log_step(&log_x, &log_u, &spec.weights);
        let x = exp_state(&log_x).map_err(relabel(t))?;
        if T::MODE == Mode::Real && x.values().iter().any(|v| v.as_complex().re <= 0.0) {
            return Err(Error::Divergence { step: t });
        }
        if t >= washout {
            states.set_row(t - washout, &x.values().transpose());
        }
    }
    Ok(Trajectory::new(states, washout))
}

/// Euclidean distance, step by step, between two copies of the same reservoir
/// started from `init_a` and `init_b` and driven by identical inputs. Entry
/// `t` is the distance after consuming input `t`.
pub fn esp_divergence(
    spec: &ReservoirSpec,
    inputs: &DMatrix<f64>,
    init_a: ReservoirState<f64>,
    init_b: ReservoirState<f64>,
) -> Result<Vec<f64>> {
    let a = run_from(spec, init_a, inputs, 0)?;
    let b = run_from(spec, init_b, inputs, 0)?;
    Ok((0..a.len())
        .map(|t| (a.states().row(t) - b.states().row(t)).norm())
        .collect())
}
