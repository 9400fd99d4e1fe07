//! Primitive gas states, conservative fluxes and characteristic structure of the
//! steady two-dimensional tau-scaled Euler system (tau > 0) and of its
//! hypersonic small-disturbance limit (tau = 0).
//!
//! The marching direction is `x`; states are functions of the transverse
//! coordinate `y`. All operations are pure functions of value types.

mod eigen;
mod flux;
mod state;

pub use eigen::{
    characteristic_residual, eigenvalue, eigenvalue_gradient, eigenvalue_gradient_fd, eigenvalues,
    eigenvector, eigenvector_normalization, genuine_nonlinearity, raw_eigenvector,
};
pub use flux::{entropy_pair, flux_jacobians, fluxes, rh_residual, FluxPair, Mat4};
pub use state::{DomainError, GasParams, State};

/// Characteristic family index (1..=4).
pub type Family = usize;

/// Checks that `family` is one of the four physical families.
pub fn check_family(family: Family) -> Result<(), DomainError> {
    if (1..=4).contains(&family) {
        Ok(())
    } else {
        Err(DomainError::Family(family))
    }
}
