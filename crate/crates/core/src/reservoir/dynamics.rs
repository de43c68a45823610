//! Single-step reservoir updates and the product-network closed form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{Activation, ReservoirState};
use super::weights::WeightSet;
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

fn check_input_dim(input: usize, w: &WeightSet) -> Result<()> {
    if input != w.input_dim() {
        return Err(Error::Dimension(format!(
            "input has {input} channels, weights expect {}",
            w.input_dim()
        )));
    }
    Ok(())
}

fn check_state_dim(state: usize, w: &WeightSet) -> Result<()> {
    if state != w.size() {
        return Err(Error::Dimension(format!(
            "state has {state} nodes, weights expect {}",
            w.size()
        )));
    }
    Ok(())
}

/// `f(W x + w_in u)` element-wise, without bias.
pub fn step_additive(
    state: &ReservoirState<f64>,
    input: &[f64],
    w: &WeightSet,
    activation: Activation,
) -> Result<ReservoirState<f64>> {
    check_state_dim(state.len(), w)?;
    check_input_dim(input.len(), w)?;
    let mut next = w.recurrent() * state.values();
    next.gemv(1.0, w.input(), &DVector::from_column_slice(input), 1.0);
    next.apply(|v| *v = activation.apply(*v));
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { step: 0 });
    }
    Ok(ReservoirState::from_unchecked(next))
}

/// Element-wise logarithm of a product-reservoir input row. Real-mode inputs
/// must be strictly positive; complex mode takes the principal branch.
pub(crate) fn log_input<T: Scalar>(input: &[T]) -> Result<DVector<T>> {
    for (index, &v) in input.iter().enumerate() {
        if !v.log_admissible() {
            return Err(match T::MODE {
                Mode::Real => Error::NonPositiveInput {
                    index,
                    value: v.as_complex().re,
                },
                Mode::Complex => Error::HistoryReset,
            });
        }
    }
    Ok(DVector::from_iterator(input.len(), input.iter().map(|v| v.ln())))
}

pub(crate) fn log_state<T: Scalar>(state: &ReservoirState<T>) -> Result<DVector<T>> {
    if let Some(i) = state.values().iter().position(|v| !v.log_admissible()) {
        return Err(match T::MODE {
            Mode::Real => Error::InvalidArgument(format!(
                "real-mode product state entry {i} is not strictly positive"
            )),
            Mode::Complex => Error::HistoryReset,
        });
    }
    Ok(state.values().map(|v| v.ln()))
}

/// Advances a log-space state by one input: `W log x + w_in log u`.
pub(crate) fn log_step<T: Scalar>(log_x: &DVector<T>, log_u: &DVector<T>, w: &WeightSet) -> DVector<T> {
    T::mat_vec(w.recurrent(), log_x) + T::mat_vec(w.input(), log_u)
}

pub(crate) fn exp_state<T: Scalar>(log_x: &DVector<T>) -> Result<ReservoirState<T>> {
    let x = log_x.map(|v| v.exp());
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { step: 0 });
    }
    Ok(ReservoirState::from_unchecked(x))
}

/// One update of a recurrent product network,
/// `x(t) = exp(W log x(t-1) + w_in log u(t-1))`.
///
/// Real mode needs strictly positive state and input; complex mode accepts
/// negative inputs through the principal logarithm.
pub fn step_product<T: Scalar>(
    state: &ReservoirState<T>,
    input: &[T],
    w: &WeightSet,
) -> Result<ReservoirState<T>> {
    check_state_dim(state.len(), w)?;
    check_input_dim(input.len(), w)?;
    let log_x = log_state(state)?;
    let log_u = log_input(input)?;
    let next = exp_state(&log_step(&log_x, &log_u, w))?;
    if T::MODE == Mode::Real && next.values().iter().any(|v| v.as_complex().re <= 0.0) {
        // exp underflowed to zero
        return Err(Error::Divergence { step: 0 });
    }
    Ok(next)
}

/// Response `u^omega` of a single product node, optionally multiplied by the
/// feedback term `prev^feedback_weight`.
///
/// Negative inputs give `|u|^omega e^{i pi omega}`. A zero input or zero
/// previous output resets the node and is reported as [`Error::HistoryReset`].
/// Feedback weights above roughly 0.8 make the node a poor store of its input
/// history; this is not enforced.
pub fn product_node_response(
    u: f64,
    omega: f64,
    feedback: Option<(Complex64, f64)>,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::HistoryReset);
    }
    if !u.is_finite() || !omega.is_finite() {
        return Err(Error::InvalidArgument("input and exponent must be finite".into()));
    }
    let mut out = (Complex64::new(u, 0.0).ln() * omega).exp();
    if let Some((prev, weight)) = feedback {
        if prev == Complex64::new(0.0, 0.0) {
            return Err(Error::HistoryReset);
        }
        out *= (prev.ln() * weight).exp();
    }
    Ok(out)
}

/// State of a product network after `t` inputs, written directly in terms of
/// the initial state and input history:
/// `x(t) = exp(W^t log x(0) + sum_{i<t} W^{t-i-1} w_in log u(i))`.
///
/// `inputs` has one row per time step and must have at least `t` rows. Matrix
/// powers are formed explicitly rather than by iterating the update.
pub fn closed_form_product_state<T: Scalar>(
    init: &ReservoirState<T>,
    inputs: &DMatrix<T>,
    w: &WeightSet,
    t: usize,
) -> Result<ReservoirState<T>> {
    check_state_dim(init.len(), w)?;
    check_input_dim(inputs.ncols(), w)?;
    if inputs.nrows() < t {
        return Err(Error::Dimension(format!(
            "closed form at t = {t} needs {t} input rows, got {}",
            inputs.nrows()
        )));
    }
    let log_x0 = log_state(init)?;
    if t == 0 {
        return Ok(init.clone());
    }

    let n = w.size();
    let mut powers = Vec::with_capacity(t + 1);
    powers.push(DMatrix::<f64>::identity(n, n));
    for k in 1..=t {
        powers.push(&powers[k - 1] * w.recurrent());
    }

    let mut acc = T::mat_vec(&powers[t], &log_x0);
    for i in 0..t {
        let row: Vec<T> = inputs.row(i).iter().copied().collect();
        let drive = T::mat_vec(w.input(), &log_input(&row)?);
        acc += T::mat_vec(&powers[t - i - 1], &drive);
    }
    exp_state(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn weights(rec: &[f64], inp: &[f64]) -> WeightSet {
        let n = inp.len();
        WeightSet::from_parts(
            DMatrix::from_row_slice(n, n, rec),
            DMatrix::from_column_slice(n, 1, inp),
        )
        .unwrap()
    }

    #[test]
    fn additive_zero_state_zero_input_stays_zero() {
        let w = weights(&[0.3, 0.1, -0.7, 0.2], &[0.5, 0.5]);
        let s = step_additive(&ReservoirState::zeros(2), &[0.0], &w, Activation::Identity).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn additive_zero_state_passes_input_weights() {
        let w = weights(&[0.3, 0.1, -0.7, 0.2], &[0.3, -0.2]);
        let s = step_additive(&ReservoirState::zeros(2), &[1.0], &w, Activation::Identity).unwrap();
        assert_eq!(s.values().as_slice(), &[0.3, -0.2]);
    }

    #[test]
    fn additive_reports_divergence() {
        let w = weights(&[1e308, 0.0, 0.0, 1e308], &[0.0, 0.0]);
        let s = ReservoirState::from_slice(&[10.0, 10.0]).unwrap();
        assert!(matches!(
            step_additive(&s, &[0.0], &w, Activation::Identity),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn additive_dimension_mismatch() {
        let w = weights(&[0.3, 0.1, -0.7, 0.2], &[0.3, -0.2]);
        assert!(step_additive(&ReservoirState::zeros(3), &[1.0], &w, Activation::Tanh).is_err());
        assert!(step_additive(&ReservoirState::zeros(2), &[1.0, 2.0], &w, Activation::Tanh).is_err());
    }

    #[test]
    fn product_ones_are_a_fixed_point() {
        let w = weights(&[0.3, -1.1, 0.7, 0.2], &[0.4, -2.0]);
        let s = step_product(&ReservoirState::<f64>::ones(2), &[1.0], &w).unwrap();
        assert_eq!(s.values().as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn product_hand_evaluation() {
        // x_i = 1^0.5 * 1^0 * (1/e)^1
        let w = weights(&[0.5, 0.0, 0.0, 0.5], &[1.0, 1.0]);
        let s = step_product(&ReservoirState::<f64>::ones(2), &[E.recip()], &w).unwrap();
        for v in s.values().iter() {
            assert!((v - E.recip()).abs() < 1e-15);
        }
    }

    #[test]
    fn product_rejects_non_positive_real_input() {
        let w = weights(&[0.5, 0.0, 0.0, 0.5], &[1.0, 1.0]);
        let ones = ReservoirState::<f64>::ones(2);
        assert!(matches!(
            step_product(&ones, &[-0.5], &w),
            Err(Error::NonPositiveInput { .. })
        ));
        assert!(step_product(&ones, &[0.0], &w).is_err());
        let bad = ReservoirState::from_slice(&[1.0, -1.0]).unwrap();
        assert!(step_product(&bad, &[0.5], &w).is_err());
    }

    #[test]
    fn product_complex_mode_accepts_negative_input() {
        let w = weights(&[0.0], &[0.5]);
        let s = step_product(
            &ReservoirState::<Complex64>::ones(1),
            &[Complex64::new(-0.1, 0.0)],
            &w,
        )
        .unwrap();
        let v = s.values()[0];
        assert!((v.norm() - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((v.arg() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn node_response_values() {
        let r = product_node_response(0.1, 1.0, None).unwrap();
        assert!((r - Complex64::new(0.1, 0.0)).norm() < 1e-15);
        let r = product_node_response(0.1, 0.0, None).unwrap();
        assert_eq!(r, Complex64::new(1.0, 0.0));
        let r = product_node_response(-0.1, 0.5, None).unwrap();
        assert!(r.re.abs() < 1e-16);
        assert!((r.im - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((r.im - 0.31622776601683794).abs() < 1e-15);
    }

    #[test]
    fn node_response_with_feedback() {
        let r = product_node_response(0.25, 0.5, Some((Complex64::new(0.04, 0.0), 0.5))).unwrap();
        assert!((r - Complex64::new(0.1, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_input_resets_history() {
        assert!(matches!(
            product_node_response(0.0, 0.5, None),
            Err(Error::HistoryReset)
        ));
        assert!(matches!(
            product_node_response(0.5, 0.5, Some((Complex64::new(0.0, 0.0), 0.3))),
            Err(Error::HistoryReset)
        ));
    }

    #[test]
    fn closed_form_base_cases() {
        let w = weights(&[0.2, -0.4, 0.3, 0.1], &[0.7, -0.3]);
        let init = ReservoirState::from_slice(&[0.6, 1.7]).unwrap();
        let inputs = DMatrix::from_column_slice(3, 1, &[0.2, 0.9, 0.4]);
        assert_eq!(closed_form_product_state(&init, &inputs, &w, 0).unwrap(), init);
        let one = closed_form_product_state(&init, &inputs, &w, 1).unwrap();
        let step = step_product(&init, &[0.2], &w).unwrap();
        assert!((one.values() - step.values()).abs().max() < 1e-15);
        assert!(closed_form_product_state(&init, &inputs, &w, 4).is_err());
    }
}
