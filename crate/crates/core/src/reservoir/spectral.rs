use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest eigenvalue modulus of a square real matrix.
///
/// Uses the full real Schur decomposition. Random Gaussian reservoirs usually
/// have a complex-conjugate dominant pair, which plain power iteration does not
/// resolve, and the dense solve is cheap up to a few hundred nodes.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "spectral radius needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    let eigenvalues = m.clone().complex_eigenvalues();
    Ok(eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
