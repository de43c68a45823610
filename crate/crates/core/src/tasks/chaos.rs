//! Chaotic benchmark series integrated with classic fourth-order Runge-Kutta.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `dx/dt = beta x(t - delay) / (1 + x(t - delay)^exponent) - gamma x(t)`,
/// with `x(t) = history` for `t <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MackeyGlassParams {
    pub beta: f64,
    pub exponent: f64,
    pub gamma: f64,
    pub delay: f64,
    pub dt: f64,
    pub history: f64,
}

impl Default for MackeyGlassParams {
    fn default() -> Self {
        Self {
            beta: 0.2,
            exponent: 10.0,
            gamma: 0.1,
            delay: 17.0,
            dt: 0.1,
            history: 1.2,
        }
    }
}

impl MackeyGlassParams {
    /// Delay expressed in integration steps.
    pub fn lag_steps(&self) -> Result<usize> {
        let lag = self.delay / self.dt;
        if !(lag.is_finite() && lag >= 1.0) || (lag - lag.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "delay {} must be a positive integer multiple of dt {}",
                self.delay, self.dt
            )));
        }
        Ok(lag.round() as usize)
    }

    fn validate(&self) -> Result<()> {
        let nonneg = [self.beta, self.exponent, self.gamma];
        if nonneg.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument(
                "Mackey-Glass beta, exponent and gamma must be finite and non-negative".into(),
            ));
        }
        if !(self.dt > 0.0 && self.history.is_finite()) {
            return Err(Error::InvalidArgument(
                "Mackey-Glass dt must be positive and history finite".into(),
            ));
        }
        self.lag_steps().map(|_| ())
    }

    fn rhs(&self, x: f64, delayed: f64) -> f64 {
        self.beta * delayed / (1.0 + delayed.powf(self.exponent)) - self.gamma * x
    }
}

/// Integrates the Mackey-Glass equation and returns `t_steps` samples, one per
/// integration step, after discarding the first `warmup`.
///
/// Delayed values come from a ring buffer of past grid points; the half-step
/// stages use the average of the two neighbouring grid values.
pub fn mackey_glass(t_steps: usize, p: &MackeyGlassParams, warmup: usize) -> Result<Vec<f64>> {
    p.validate()?;
    let lag = p.lag_steps()?;
    let dt = p.dt;

    // x(t_k - lag dt), ..., x(t_k)
    let mut ring: VecDeque<f64> = std::iter::repeat(p.history).take(lag + 1).collect();
    let mut out = Vec::with_capacity(t_steps);
    for step in 0..warmup + t_steps {
        let x = ring[lag];
        let d0 = ring[0];
        let d1 = ring[1];
        let dh = 0.5 * (d0 + d1);
        let k1 = p.rhs(x, d0);
        let k2 = p.rhs(x + 0.5 * dt * k1, dh);
        let k3 = p.rhs(x + 0.5 * dt * k2, dh);
        let k4 = p.rhs(x + dt * k3, d1);
        let next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(Error::Divergence { step });
        }
        ring.pop_front();
        ring.push_back(next);
        if step >= warmup {
            out.push(next);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub dt: f64,
    pub initial: [f64; 3],
    pub transient_discard: usize,
}

impl Default for LorenzParams {
    fn default() -> Self {
        Self {
            sigma: 10.0,
            rho: 28.0,
            beta: 8.0 / 3.0,
            dt: 0.01,
            initial: [1.0, 1.0, 1.0],
            transient_discard: 1000,
        }
    }
}

impl LorenzParams {
    fn rhs(&self, s: [f64; 3]) -> [f64; 3] {
        let [x, y, z] = s;
        [
            self.sigma * (y - x),
            x * (self.rho - z) - y,
            x * y - self.beta * z,
        ]
    }
}

fn axpy(s: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]]
}

/// Integrates the Lorenz system and returns a `t_steps x 3` matrix of
/// (x, y, z), one row per integration step, after dropping
/// `transient_discard` leading samples.
pub fn lorenz(t_steps: usize, p: &LorenzParams) -> Result<DMatrix<f64>> {
    let coeffs = [p.sigma, p.rho, p.beta];
    if coeffs.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || !(p.dt > 0.0) {
        return Err(Error::InvalidArgument(
            "Lorenz coefficients must be non-negative and dt positive".into(),
        ));
    }
    if p.initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("Lorenz initial point must be finite".into()));
    }

    let dt = p.dt;
    let mut s = p.initial;
    let mut out = DMatrix::zeros(t_steps, 3);
    for step in 0..p.transient_discard + t_steps {
        let k1 = p.rhs(s);
        let k2 = p.rhs(axpy(s, 0.5 * dt, k1));
        let k3 = p.rhs(axpy(s, 0.5 * dt, k2));
        let k4 = p.rhs(axpy(s, dt, k3));
        for i in 0..3 {
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        if step >= p.transient_discard {
            let row = step - p.transient_discard;
            for i in 0..3 {
                out[(row, i)] = s[i];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mackey_glass_without_feedback_decays_exponentially() {
        let p = MackeyGlassParams {
            beta: 0.0,
            history: 1.5,
            ..Default::default()
        };
        let xs = mackey_glass(500, &p, 0).unwrap();
        for (k, x) in xs.iter().enumerate() {
            let t = (k + 1) as f64 * p.dt;
            let exact = 1.5 * (-p.gamma * t).exp();
            // RK4 global error is O(dt^4)
            assert!((x - exact).abs() < 1e-8, "{k}: {x} vs {exact}");
        }
    }

    #[test]
    fn mackey_glass_stays_bounded_and_positive() {
        let xs = mackey_glass(10_000, &MackeyGlassParams::default(), 1000).unwrap();
        assert_eq!(xs.len(), 10_000);
        assert!(xs.iter().all(|&x| x > 0.0 && x < 2.0));
    }

    #[test]
    fn mackey_glass_rejects_fractional_lag() {
        let p = MackeyGlassParams {
            dt: 0.3,
            ..Default::default()
        };
        assert!(mackey_glass(10, &p, 0).is_err());
    }

    #[test]
    fn lorenz_without_sigma_keeps_x() {
        let p = LorenzParams {
            sigma: 0.0,
            initial: [2.0, -1.0, 10.0],
            transient_discard: 0,
            ..Default::default()
        };
        let traj = lorenz(1000, &p).unwrap();
        assert!(traj.column(0).iter().all(|&x| x == 2.0));
    }

    #[test]
    fn lorenz_shape_and_discard() {
        let p = LorenzParams::default();
        let long = lorenz(50, &LorenzParams { transient_discard: 0, ..p }).unwrap();
        let short = lorenz(20, &LorenzParams { transient_discard: 30, ..p }).unwrap();
        assert_eq!(short.nrows(), 20);
        assert_eq!(short.ncols(), 3);
        assert_eq!(short.row(0), long.row(30));
    }
}
