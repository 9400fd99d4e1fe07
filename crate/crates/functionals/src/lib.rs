//! Glimm and Lyapunov functionals plus exact norms over front-tracking slices.

mod glimm;
mod lyapunov;
mod norms;
mod trace;

use front_tracking::EngineError;
use riemann::RiemannError;
use thiserror::Error;

pub use glimm::{
    approaching, glimm_functional, glimm_steps, interaction_potential, GlimmBounds, GlimmParts, GlimmStep, GlimmWeights,
};
pub use lyapunov::{
    boundary_hugoniot_coefficients, boundary_slope_term, lyapunov_bulk, lyapunov_functional, LyapunovValue,
    LyapunovWeights,
};
pub use norms::{
    bv_total_variation, entropy_production_check, flow_slope_trace, l1_distance, FlowSlopeTrace, FrontProduction,
    Quantity,
};
pub use trace::{glimm_trace, FunctionalTrace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Riemann(#[from] RiemannError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("solutions differ as y -> -infinity")]
    FarField,
    #[error("curve leaves the fluid domain at x = {0}")]
    OutsideDomain(f64),
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("slices at different stations {0} and {1}")]
    Station(f64, f64),
}
