//! Linear readout trained by minimum-norm least squares.
//!
//! The design matrix is the trajectory with a trailing column of ones. It is
//! reduced with a thin QR factorisation and the small R factor is decomposed by
//! SVD; singular values below `rcond * sigma_max` are dropped, giving the
//! Moore-Penrose pseudo-inverse solution. Complex trajectories are solved in
//! the complex field with conjugate transposes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::reservoir::{Family, Trajectory};
use crate::scalar::Scalar;

pub const DEFAULT_RCOND: f64 = 1e-12;

/// Solver settings. `ridge` adds Tikhonov damping `sigma / (sigma^2 + ridge)`
/// in place of `1 / sigma`; the default of zero is the plain pseudo-inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rcond: f64,
    pub ridge: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rcond: DEFAULT_RCOND,
            ridge: 0.0,
        }
    }
}

impl SolverOptions {
    pub fn with_rcond(rcond: f64) -> Self {
        Self {
            rcond,
            ..Self::default()
        }
    }
}

/// What a readout was trained on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingInfo {
    pub family: Family,
    pub size: usize,
    pub task: String,
    pub seed: u64,
}

/// Trained output weights: one per node plus a trailing constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct Readout<T: Scalar = f64> {
    weights: DVector<T>,
    info: Option<TrainingInfo>,
}

impl<T: Scalar> Readout<T> {
    pub fn new(weights: DVector<T>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Dimension(
                "a readout needs at least one node weight and a constant term".into(),
            ));
        }
        Ok(Self {
            weights,
            info: None,
        })
    }

    pub fn with_info(mut self, info: TrainingInfo) -> Self {
        self.info = Some(info);
        self
    }

    pub fn weights(&self) -> &DVector<T> {
        &self.weights
    }

    pub fn info(&self) -> Option<&TrainingInfo> {
        self.info.as_ref()
    }

    /// Reservoir size this readout expects.
    pub fn size(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Pseudo-inverse of a fixed design matrix, reusable across many targets.
///
/// The factors are kept and applied in sequence; multiplying out an explicit
/// pseudo-inverse loses several digits on ill-conditioned designs.
#[derive(Debug, Clone)]
pub struct LeastSquares<T: Scalar = f64> {
    rows: usize,
    q: Option<DMatrix<T>>,
    u: DMatrix<T>,
    inv: Vec<f64>,
    v: DMatrix<T>,
}

impl<T: Scalar> LeastSquares<T> {
    pub fn new(design: &DMatrix<T>, options: SolverOptions) -> Result<Self> {
        if design.is_empty() {
            return Err(Error::Dimension("empty design matrix".into()));
        }
        if design.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("design matrix is not finite".into()));
        }
        if !(options.rcond >= 0.0) || !(options.ridge >= 0.0) {
            return Err(Error::InvalidArgument(
                "rcond and ridge must be non-negative".into(),
            ));
        }
        if design.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroDesign);
        }

        // Tall designs go through a thin QR first so the SVD only sees an
        // (N+1) x (N+1) factor.
        let (left, core) = if design.nrows() > design.ncols() {
            let qr = design.clone().qr();
            (Some(qr.q()), qr.r())
        } else {
            (None, design.clone())
        };

        let svd = core.svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let sigma = &svd.singular_values;
        let cutoff = options.rcond * sigma.max();

        let inv: Vec<f64> = sigma
            .iter()
            .map(|&s| {
                if s <= cutoff || s == 0.0 {
                    0.0
                } else if options.ridge > 0.0 {
                    s / (s * s + options.ridge)
                } else {
                    1.0 / s
                }
            })
            .collect();

        Ok(Self {
            rows: design.nrows(),
            q: left,
            u,
            inv,
            v: v_t.adjoint(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn solve(&self, targets: &DVector<T>) -> Result<DVector<T>> {
        if targets.len() != self.rows {
            return Err(Error::Dimension(format!(
                "{} targets for a design with {} rows",
                targets.len(),
                self.rows
            )));
        }
        if targets.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("targets are not finite".into()));
        }
        let projected = match &self.q {
            Some(q) => q.ad_mul(targets),
            None => targets.clone(),
        };
        let mut z = self.u.ad_mul(&projected);
        for (zi, &w) in z.iter_mut().zip(&self.inv) {
            *zi = zi.scale(w);
        }
        Ok(&self.v * z)
    }
}

/// Fits the readout minimising `||X' psi - targets||` with minimum `||psi||`,
/// where `X'` is the augmented trajectory.
pub fn train_readout<T: Scalar>(
    traj: &Trajectory<T>,
    targets: &[T],
    rcond: f64,
) -> Result<Readout<T>> {
    train_readout_with(traj, targets, SolverOptions::with_rcond(rcond))
}

pub fn train_readout_with<T: Scalar>(
    traj: &Trajectory<T>,
    targets: &[T],
    options: SolverOptions,
) -> Result<Readout<T>> {
    if traj.len() != targets.len() {
        return Err(Error::Dimension(format!(
            "trajectory has {} rows but {} targets were given",
            traj.len(),
            targets.len()
        )));
    }
    let solver = LeastSquares::new(&traj.augmented(), options)?;
    Readout::new(solver.solve(&DVector::from_column_slice(targets))?)
}

/// `y(t) = psi . [x(t); 1]` for every row of the trajectory.
pub fn predict<T: Scalar>(readout: &Readout<T>, traj: &Trajectory<T>) -> Result<Vec<T>> {
    if readout.size() != traj.size() {
        return Err(Error::Dimension(format!(
            "readout expects {} nodes, trajectory has {}",
            readout.size(),
            traj.size()
        )));
    }
    let n = traj.size();
    let node_weights = readout.weights.rows(0, n);
    let constant = readout.weights[n];
    let out = traj.states() * node_weights;
    Ok(out.iter().map(|&v| v + constant).collect())
}
