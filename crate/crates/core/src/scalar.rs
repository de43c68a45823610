//! Element types a reservoir state can live in.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

/// Whether a state holds real or complex node values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Real,
    Complex,
}

/// `f64` or `Complex64`. Complex values use the principal branch of the
/// logarithm, with phase in (-pi, pi].
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    const MODE: Mode;

    /// `m * v` for a real matrix acting on a vector of this type.
    fn mat_vec(m: &DMatrix<f64>, v: &DVector<Self>) -> DVector<Self>;

    /// Whether the value can be fed through the product-node logarithm.
    fn log_admissible(self) -> bool;

    fn as_complex(self) -> Complex64;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Real;

    fn mat_vec(m: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        m * v
    }

    fn log_admissible(self) -> bool {
        self > 0.0
    }

    fn as_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Complex;

    fn mat_vec(m: &DMatrix<f64>, v: &DVector<Complex64>) -> DVector<Complex64> {
        let re = m * v.map(|c| c.re);
        let im = m * v.map(|c| c.im);
        re.zip_map(&im, Complex64::new)
    }

    fn log_admissible(self) -> bool {
        self != Complex64::new(0.0, 0.0)
    }

    fn as_complex(self) -> Complex64 {
        self
    }
}
