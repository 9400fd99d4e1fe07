//! Wave-front tracking for steady supersonic flow below a piecewise straight wall.

mod boundary;
mod data;
mod engine;
mod export;
mod slice;

use euler_core::{DomainError, State};
use riemann::RiemannError;
use thiserror::Error;
use wave_curves::CurveError;

pub use boundary::{BoundaryPolyline, ANGLE_SNAP};
pub use data::{approximate_initial_data, PiecewiseData};
pub use engine::{
    default_lambda_hat, run, Engine, EngineConfig, Event, EventKind, EventRecord, ResolvedKind, Trajectory, COINCIDENCE,
    DROP_STRENGTH,
};
pub use export::{format_float, write_trajectory};
pub use slice::{Front, Profile, SolutionSlice};
pub use wave_curves::WaveFamily;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Riemann(#[from] RiemannError),
    #[error("state {state} left the trust region at x = {x}")]
    Trust { x: f64, state: State },
    #[error("event budget of {0} exceeded")]
    Budget(usize),
    #[error("station {0} outside the computed range")]
    Range(f64),
}
