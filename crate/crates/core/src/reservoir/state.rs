use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::weights::WeightSet;
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
use crate::DEFAULT_EPSILON;

/// Reservoir node type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Tanh,
    Product,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Linear, Family::Tanh, Family::Product];

    pub fn label(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Tanh => "tanh",
            Family::Product => "product",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Family::Linear),
            "tanh" => Ok(Family::Tanh),
            "product" => Ok(Family::Product),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Element-wise transfer function of an additive reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Tanh,
}

impl Activation {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Activation::Identity => v,
            Activation::Tanh => v.tanh(),
        }
    }
}

/// Node activations of a reservoir at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState<T: Scalar = f64> {
    values: DVector<T>,
}

impl<T: Scalar> ReservoirState<T> {
    pub fn new(values: DVector<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "state entry {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[T]) -> Result<Self> {
        Self::new(DVector::from_column_slice(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: DVector::from_element(n, T::zero()),
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            values: DVector::from_element(n, T::one()),
        }
    }

    pub fn values(&self) -> &DVector<T> {
        &self.values
    }

    pub fn into_values(self) -> DVector<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    /// Euclidean distance to another state of the same size.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.values - &other.values).norm()
    }

    pub(crate) fn from_unchecked(values: DVector<T>) -> Self {
        Self { values }
    }
}

/// A reservoir ready to be driven: node type plus weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirSpec {
    pub family: Family,
    pub weights: WeightSet,
    /// Product reservoirs clamp real inputs into `[floor, 1]` before taking
    /// the logarithm. `None` feeds inputs through unchanged.
    pub input_floor: Option<f64>,
}

impl ReservoirSpec {
    pub fn new(family: Family, weights: WeightSet) -> Self {
        Self {
            family,
            weights,
            input_floor: Some(DEFAULT_EPSILON),
        }
    }

    pub fn with_input_floor(mut self, floor: Option<f64>) -> Self {
        self.input_floor = floor;
        self
    }

    pub fn size(&self) -> usize {
        self.weights.size()
    }

    /// Zeros for additive reservoirs, ones for product reservoirs.
    pub fn initial_state<T: Scalar>(&self) -> ReservoirState<T> {
        match self.family {
            Family::Linear | Family::Tanh => ReservoirState::zeros(self.size()),
            Family::Product => ReservoirState::ones(self.size()),
        }
    }
}

/// States recorded while driving a reservoir. Row `t` is the state after
/// consuming input `washout + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Scalar = f64> {
    states: DMatrix<T>,
    washout: usize,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(states: DMatrix<T>, washout: usize) -> Self {
        Self { states, washout }
    }

    /// T x N node values.
    pub fn states(&self) -> &DMatrix<T> {
        &self.states
    }

    /// T x (N + 1) design matrix: the states with a trailing column of ones.
    pub fn augmented(&self) -> DMatrix<T> {
        let n = self.states.ncols();
        self.states.clone().insert_column(n, T::one())
    }

    pub fn washout(&self) -> usize {
        self.washout
    }

    pub fn len(&self) -> usize {
        self.states.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.states.nrows() == 0
    }

    /// Number of reservoir nodes.
    pub fn size(&self) -> usize {
        self.states.ncols()
    }

    pub fn row(&self, t: usize) -> DVector<T> {
        self.states.row(t).transpose()
    }

    /// Rows `[start, start + len)`, keeping track of the absolute input offset.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.len() {
            return Err(Error::Dimension(format!(
                "rows {start}..{} out of range for a trajectory of {} rows",
                start + len,
                self.len()
            )));
        }
        Ok(Self {
            states: self.states.rows(start, len).into_owned(),
            washout: self.washout + start,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trips_through_labels() {
        for f in Family::ALL {
            assert_eq!(f.label().parse::<Family>().unwrap(), f);
        }
        assert!("sigmoid".parse::<Family>().is_err());
    }

    #[test]
    fn initial_state_follows_family() {
        let w = WeightSet::from_parts(DMatrix::zeros(3, 3), DMatrix::zeros(3, 1)).unwrap();
        let lin = ReservoirSpec::new(Family::Linear, w.clone()).initial_state::<f64>();
        let prod = ReservoirSpec::new(Family::Product, w).initial_state::<f64>();
        assert!(lin.values().iter().all(|&v| v == 0.0));
        assert!(prod.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn augmented_has_constant_column() {
        let traj = Trajectory::new(DMatrix::from_fn(4, 2, |i, j| (i * 2 + j) as f64), 0);
        let aug = traj.augmented();
        assert_eq!(aug.ncols(), 3);
        assert!(aug.column(2).iter().all(|&v| v == 1.0));
        assert_eq!(aug.columns(0, 2), traj.states().columns(0, 2));
    }

    #[test]
    fn state_rejects_non_finite() {
        assert!(ReservoirState::from_slice(&[1.0, f64::INFINITY]).is_err());
    }
}
