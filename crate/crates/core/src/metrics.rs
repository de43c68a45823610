//! Capacity and prediction-error scores.
//!
//! All moments are population moments (divide by T). For complex sequences the
//! scores are moduli: capacity is `|Cov(y, y_hat)|^2 / (Var y * Var y_hat)` with
//! `Cov(a, b) = E[(a - mean a) conj(b - mean b)]` and `Var a = E|a - mean a|^2`,
//! which reduces to the real formula exactly when the imaginary parts vanish.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A capacity value; `degenerate` is set when either sequence is constant,
/// in which case `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub value: f64,
    pub degenerate: bool,
}

fn mean<T: Scalar>(v: &[T]) -> T {
    let sum = v.iter().fold(T::zero(), |acc, &x| acc + x);
    sum.unscale(v.len() as f64)
}

fn variance<T: Scalar>(v: &[T], m: T) -> f64 {
    v.iter().map(|&x| (x - m).modulus_squared()).sum::<f64>() / v.len() as f64
}

fn check_pair<T>(y: &[T], y_hat: &[T], min_len: usize) -> Result<()> {
    if y.len() != y_hat.len() {
        return Err(Error::Dimension(format!(
            "sequences differ in length: {} vs {}",
            y.len(),
            y_hat.len()
        )));
    }
    if y.len() < min_len {
        return Err(Error::InvalidArgument(format!(
            "need at least {min_len} samples, got {}",
            y.len()
        )));
    }
    Ok(())
}

/// Squared correlation between an output `y` and the desired output `y_hat`.
pub fn capacity<T: Scalar>(y: &[T], y_hat: &[T]) -> Result<Capacity> {
    check_pair(y, y_hat, 2)?;
    let (my, mh) = (mean(y), mean(y_hat));
    let (vy, vh) = (variance(y, my), variance(y_hat, mh));
    if vy == 0.0 || vh == 0.0 {
        return Ok(Capacity {
            value: 0.0,
            degenerate: true,
        });
    }
    let cov = y
        .iter()
        .zip(y_hat)
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - my) * (b - mh).conjugate())
        .unscale(y.len() as f64);
    Ok(Capacity {
        value: cov.modulus_squared() / (vy * vh),
        degenerate: false,
    })
}

/// Sum of the per-delay capacities.
pub fn total_capacity(per_tau: &BTreeMap<usize, f64>) -> f64 {
    per_tau.values().sum()
}

/// Root mean squared error divided by the variance of the desired output:
/// `sqrt(mean |y - y_hat|^2) / Var(y_hat)`.
///
/// The denominator is a variance, not a standard deviation, so the score is not
/// scale-free: scaling both sequences by `c` divides it by `c`. See
/// [`nmse_conventional`] for the usual `MSE / Var` form.
pub fn nmse<T: Scalar>(y: &[T], y_hat: &[T]) -> Result<f64> {
    let (mse, var) = mse_and_variance(y, y_hat)?;
    Ok(mse.sqrt() / var)
}

/// `mean |y - y_hat|^2 / Var(y_hat)`.
pub fn nmse_conventional<T: Scalar>(y: &[T], y_hat: &[T]) -> Result<f64> {
    let (mse, var) = mse_and_variance(y, y_hat)?;
    Ok(mse / var)
}

fn mse_and_variance<T: Scalar>(y: &[T], y_hat: &[T]) -> Result<(f64, f64)> {
    check_pair(y, y_hat, 1)?;
    let var = variance(y_hat, mean(y_hat));
    if var == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mse = y
        .iter()
        .zip(y_hat)
        .map(|(&a, &b)| (a - b).modulus_squared())
        .sum::<f64>()
        / y.len() as f64;
    Ok((mse, var))
}

/// Sum of per-output NMSE values.
pub fn nmse_total(per_output: &[f64]) -> f64 {
    per_output.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identical_sequences_have_unit_capacity() {
        let y = [0.1, 0.5, -0.3, 2.0, 1.1];
        let c = capacity(&y, &y).unwrap();
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!(!c.degenerate);
    }

    #[test]
    fn affine_relation_has_unit_capacity() {
        let y = [0.1, 0.5, -0.3, 2.0, 1.1];
        let z: Vec<f64> = y.iter().map(|v| -3.0 * v + 7.0).collect();
        assert!((capacity(&y, &z).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sequence_is_degenerate() {
        let c = capacity(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(c.value, 0.0);
        assert!(c.degenerate);
        assert!(capacity(&[1.0], &[1.0]).is_err());
        assert!(capacity(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn totals() {
        assert_eq!(total_capacity(&BTreeMap::new()), 0.0);
        let m = BTreeMap::from([(1, 1.0), (2, 0.5)]);
        assert_eq!(total_capacity(&m), 1.5);
        assert_eq!(nmse_total(&[0.7]), 0.7);
        assert!((nmse_total(&[0.1, 0.2, 0.3]) - 0.6).abs() < 1e-15);
        assert_eq!(nmse_total(&[0.1, 0.2, 0.3]), nmse_total(&[0.3, 0.1, 0.2]));
    }

    #[test]
    fn nmse_hand_value() {
        // sqrt(0.5) / 0.25
        let v = nmse(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((nmse_conventional(&[0.0, 0.0], &[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nmse_zero_iff_equal() {
        let y = [0.2, 0.4, 0.9];
        assert_eq!(nmse(&y, &y).unwrap(), 0.0);
        assert!(nmse(&[0.2, 0.4, 0.91], &y).unwrap() > 0.0);
        assert!(matches!(nmse(&y, &[1.0, 1.0, 1.0]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn nmse_scales_inversely() {
        let y = [0.2, 0.45, 0.9, 0.1];
        let h = [0.25, 0.4, 0.8, 0.15];
        let c = 3.5;
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let hs: Vec<f64> = h.iter().map(|v| v * c).collect();
        let ratio = nmse(&y, &h).unwrap() / nmse(&ys, &hs).unwrap();
        assert!((ratio - c).abs() < 1e-12);
    }

    #[test]
    fn complex_path_matches_real_path() {
        let y = [0.3, -0.2, 1.4, 0.8, 0.05];
        let h = [0.25, -0.1, 1.2, 0.9, 0.0];
        let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let hc: Vec<Complex64> = h.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let dc = capacity(&y, &h).unwrap().value - capacity(&yc, &hc).unwrap().value;
        let dn = nmse(&y, &h).unwrap() - nmse(&yc, &hc).unwrap();
        assert!(dc.abs() < 1e-14 && dn.abs() < 1e-14);
    }

    #[test]
    fn complex_phase_rotation_keeps_full_capacity() {
        let y: Vec<Complex64> = (0..20).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let rot = Complex64::from_polar(2.0, 0.7);
        let z: Vec<Complex64> = y.iter().map(|&v| v * rot + Complex64::new(1.0, -1.0)).collect();
        assert!((capacity(&y, &z).unwrap().value - 1.0).abs() < 1e-12);
    }
}
