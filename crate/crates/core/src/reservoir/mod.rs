//! Reservoir weights and dynamics for additive (linear, tanh) and
//! multiplicative (product) echo state networks.

mod dynamics;
mod run;
mod spectral;
mod state;
mod weights;

pub use dynamics::{closed_form_product_state, product_node_response, step_additive, step_product};
pub use run::{esp_divergence, run_from, run_product, run_reservoir};
pub use spectral::spectral_radius;
pub use state::{Activation, Family, ReservoirSpec, ReservoirState, Trajectory};
pub use weights::{generate_weights, WeightSet};
