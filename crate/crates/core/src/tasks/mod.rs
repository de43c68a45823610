//! Benchmark inputs and targets.

mod capacity;
mod chaos;
mod dataset;
mod series_io;

pub use capacity::{
    delay_target, legendre_target, legendre_value, uniform_input, AlignedTarget, MAX_LEGENDRE_ORDER,
};
pub use chaos::{lorenz, mackey_glass, LorenzParams, MackeyGlassParams};
pub use dataset::{prediction_dataset, rescale_unit, SeriesSet, UnitScaling};
pub use series_io::{read_series, read_series_csv, write_series, write_series_csv};
