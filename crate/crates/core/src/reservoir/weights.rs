use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::spectral::spectral_radius;
use crate::error::{Error, Result};

/// Recurrent and input weights of a reservoir.
///
/// `recurrent` is N x N (row i holds the weights into node i); `input` is
/// N x K for K input channels.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    recurrent: DMatrix<f64>,
    input: DMatrix<f64>,
    spectral_radius: f64,
    input_scale: f64,
}

impl WeightSet {
    /// Wraps hand-built matrices as-is, recording their measured spectral radius.
    pub fn from_parts(recurrent: DMatrix<f64>, input: DMatrix<f64>) -> Result<Self> {
        if !recurrent.is_square() {
            return Err(Error::Dimension(format!(
                "recurrent matrix must be square, got {}x{}",
                recurrent.nrows(),
                recurrent.ncols()
            )));
        }
        if input.nrows() != recurrent.nrows() || input.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "input matrix is {}x{}, expected {} rows and at least one column",
                input.nrows(),
                input.ncols(),
                recurrent.nrows()
            )));
        }
        if input.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("input weights must be finite".into()));
        }
        let spectral_radius = spectral_radius(&recurrent)?;
        Ok(Self {
            recurrent,
            input,
            spectral_radius,
            input_scale: 1.0,
        })
    }

    pub fn recurrent(&self) -> &DMatrix<f64> {
        &self.recurrent
    }

    pub fn input(&self) -> &DMatrix<f64> {
        &self.input
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    pub fn input_scale(&self) -> f64 {
        self.input_scale
    }

    /// Number of reservoir nodes.
    pub fn size(&self) -> usize {
        self.recurrent.nrows()
    }

    /// Number of input channels.
    pub fn input_dim(&self) -> usize {
        self.input.ncols()
    }
}

/// Draws a fully connected reservoir with N(0, 1) entries, rescales the
/// recurrent matrix to spectral radius `lambda` and multiplies the N(0, 1)
/// input weights by `input_scale`.
///
/// Entries are drawn row-major, recurrent matrix first, from a ChaCha8 stream
/// seeded with `seed`, so equal arguments give bit-identical weights.
pub fn generate_weights(
    n: usize,
    input_dim: usize,
    lambda: f64,
    input_scale: f64,
    seed: u64,
) -> Result<WeightSet> {
    if n == 0 || input_dim == 0 {
        return Err(Error::InvalidArgument(
            "reservoir size and input dimension must be positive".into(),
        ));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "spectral radius must be positive, got {lambda}"
        )));
    }
    if !(input_scale > 0.0 && input_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "input scale must be positive, got {input_scale}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| {
        let values: Vec<f64> = (0..rows * cols)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        DMatrix::from_row_slice(rows, cols, &values)
    };
    let raw = draw(n, n);
    let input = draw(n, input_dim) * input_scale;

    let raw_radius = spectral_radius(&raw)?;
    if raw_radius == 0.0 || !raw_radius.is_finite() {
        return Err(Error::DegenerateSpectrum);
    }
    let recurrent = raw * (lambda / raw_radius);

    Ok(WeightSet {
        recurrent,
        input,
        spectral_radius: lambda,
        input_scale,
    })
}
