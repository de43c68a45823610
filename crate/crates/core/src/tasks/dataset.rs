use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Per-column affine map used by [`rescale_unit`]; `inverse` undoes it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitScaling {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl UnitScaling {
    pub fn inverse(&self, scaled: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if scaled.ncols() != self.min.len() {
            return Err(Error::Dimension(format!(
                "scaling has {} columns, matrix has {}",
                self.min.len(),
                scaled.ncols()
            )));
        }
        Ok(DMatrix::from_fn(scaled.nrows(), scaled.ncols(), |i, j| {
            self.min[j] + scaled[(i, j)] * (self.max[j] - self.min[j])
        }))
    }
}

/// Maps every column affinely onto [0, 1], then raises values below
/// `epsilon` to `epsilon` so a product reservoir can take their logarithm.
pub fn rescale_unit(series: &DMatrix<f64>, epsilon: f64) -> Result<(DMatrix<f64>, UnitScaling)> {
    if series.nrows() == 0 || series.ncols() == 0 {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "clamp epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    let mut min = Vec::with_capacity(series.ncols());
    let mut max = Vec::with_capacity(series.ncols());
    for (j, col) in series.column_iter().enumerate() {
        let lo = col.min();
        let hi = col.max();
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "column {j} is constant or non-finite and cannot be rescaled"
            )));
        }
        min.push(lo);
        max.push(hi);
    }
    let scaled = DMatrix::from_fn(series.nrows(), series.ncols(), |i, j| {
        ((series[(i, j)] - min[j]) / (max[j] - min[j])).max(epsilon)
    });
    Ok((scaled, UnitScaling { min, max }))
}

/// Inputs and targets for a benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSet {
    /// T x K
    pub inputs: DMatrix<f64>,
    /// T x M
    pub targets: DMatrix<f64>,
    pub tau: usize,
    pub task_id: String,
}

/// Pairs each row of `series` with the row `tau` steps later:
/// inputs are rows `[0, T - tau)`, targets rows `[tau, T)`, all columns.
pub fn prediction_dataset(series: &DMatrix<f64>, tau: usize) -> Result<SeriesSet> {
    if tau == 0 {
        return Err(Error::InvalidArgument("prediction horizon must be at least 1".into()));
    }
    let t = series.nrows();
    if tau >= t {
        return Err(Error::InvalidArgument(format!(
            "horizon {tau} leaves no pairs in a series of {t} samples"
        )));
    }
    Ok(SeriesSet {
        inputs: series.rows(0, t - tau).into_owned(),
        targets: series.rows(tau, t - tau).into_owned(),
        tau,
        task_id: format!("predict-{tau}"),
    })
}
