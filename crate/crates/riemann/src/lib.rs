//! Interior and boundary Riemann problems, reflections at the boundary and
//! decomposition of state pairs along Hugoniot curves.

use euler_core::{eigenvector_normalization, DomainError, Family, GasParams, Mat4, State};
use thiserror::Error;
use wave_curves::newton::{self, NewtonFailure, NewtonOptions};
use wave_curves::{compose_states, elementary_wave, fan_state, hugoniot_compose, wave_curve, CurveError, WaveSpeed};

/// Componentwise radius of the neighbourhood of the background state accepted by the solvers.
pub const STATE_TRUST: f64 = 0.05;
/// Bound on `|theta| + |omega|` for boundary problems.
pub const ANGLE_TRUST: f64 = 0.1;
/// Finite-difference step for composition Jacobians.
pub const FD_STEP: f64 = 1e-7;

const SOLVER_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiemannError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("state {0} is outside the trust neighbourhood of the background")]
    Trust(State),
    #[error("angle bound violated: |theta| + |omega| = {0}")]
    Angle(f64),
    #[error("family {0} cannot be reflected at the boundary")]
    Reflection(Family),
    #[error("Newton failed after {} iterations (residual {:e}): {}", .0.iterations, .0.residual, .0.reason)]
    Newton(NewtonFailure),
}

fn opts() -> NewtonOptions {
    NewtonOptions { tol: SOLVER_TOL, max_iter: 50, fd_step: FD_STEP, max_halvings: 6 }
}

/// Solution of a Riemann problem with the four waves ordered by family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub strengths: [f64; 4],
    /// The outer states and the three middle states, from below to above.
    pub states: [State; 5],
    pub speeds: [WaveSpeed; 4],
}

impl RiemannSolution {
    pub fn middle_states(&self) -> [State; 3] {
        [self.states[1], self.states[2], self.states[3]]
    }

    pub fn below(&self) -> State {
        self.states[0]
    }

    pub fn above(&self) -> State {
        self.states[4]
    }

    /// Rebuilds the fan from given strengths.
    pub fn from_strengths(ub: &State, strengths: [f64; 4], g: &GasParams) -> Result<Self, RiemannError> {
        let mut states = [*ub; 5];
        let mut speeds = [WaveSpeed::Jump(0.0); 4];
        for j in 0..4 {
            let (s, sp) = elementary_wave(&states[j], j + 1, strengths[j], g)?;
            states[j + 1] = s;
            speeds[j] = sp;
        }
        Ok(RiemannSolution { strengths, states, speeds })
    }

    pub fn total_strength(&self) -> f64 {
        self.strengths.iter().map(|s| s.abs()).sum()
    }
}

pub fn in_trust_region(u: &State, g: &GasParams) -> bool {
    (*u - g.background()).norm_inf() <= STATE_TRUST * (1.0 + 1e-12)
}

fn check_state(u: &State, g: &GasParams) -> Result<(), RiemannError> {
    u.check(g)?;
    if !in_trust_region(u, g) {
        return Err(RiemannError::Trust(*u));
    }
    Ok(())
}

fn diff(a: &State, b: &State) -> [f64; 4] {
    (*a - *b).to_array()
}

/// Strengths `sigma` with `compose_wave_curves(ub, sigma) = ua`.
pub fn solve_riemann(ub: &State, ua: &State, g: &GasParams) -> Result<RiemannSolution, RiemannError> {
    check_state(ub, g)?;
    check_state(ua, g)?;
    let strengths = if ub == ua {
        [0.0; 4]
    } else {
        newton::solve(
            |s: &[f64; 4]| compose_states(ub, s, g).map(|st| diff(&st[4], ua)),
            [0.0; 4],
            &opts(),
        )
        .map_err(RiemannError::Newton)?
    };
    let mut sol = RiemannSolution::from_strengths(ub, strengths, g)?;
    sol.states[4] = *ua;
    Ok(sol)
}

/// Central-difference Jacobian of the wave-curve composition with respect to the strengths.
pub fn composition_jacobian(ub: &State, sigma: &[f64; 4], g: &GasParams) -> Result<Mat4, RiemannError> {
    let f = |s: &[f64; 4]| compose_states(ub, s, g).map(|st| st[4].to_array());
    let j = newton::fd_jacobian(&f, sigma, FD_STEP)?;
    let mut out = [[0.0; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = j[(r, c)];
        }
    }
    Ok(out)
}

/// Background value of `d sigma_1 / d omega` for the boundary problem.
pub fn boundary_coefficient(g: &GasParams) -> Result<f64, RiemannError> {
    Ok(1.0 / eigenvector_normalization(&g.background(), g, 1)?)
}

fn flow_angle(u: &State, g: &GasParams) -> f64 {
    u.flow_slope(g).atan()
}

fn check_angles(theta_old: f64, theta_new: f64) -> Result<(), RiemannError> {
    let b = theta_old.abs() + (theta_new - theta_old).abs();
    if !(b < ANGLE_TRUST) {
        return Err(RiemannError::Angle(b));
    }
    Ok(())
}

/// 1-wave issued where the boundary turns to inclination `theta_new`; `ub` is the state below.
pub fn solve_boundary_riemann(ub: &State, theta_new: f64, g: &GasParams) -> Result<(f64, State), RiemannError> {
    check_state(ub, g)?;
    let theta_old = flow_angle(ub, g);
    check_angles(theta_old, theta_new)?;
    if ub.boundary_residual(theta_new, g) == 0.0 {
        return Ok((0.0, *ub));
    }
    let guess = boundary_coefficient(g)? * (theta_new - theta_old);
    let sigma = newton::solve_scalar(
        |s| wave_curve(ub, 1, s, g).map(|w| w.boundary_residual(theta_new, g)),
        guess,
        &opts(),
    )
    .map_err(RiemannError::Newton)?;
    Ok((sigma, wave_curve(ub, 1, sigma, g)?))
}

/// Strength of the 1-wave reflected when a wave of family 2, 3 or 4 hits the boundary.
/// `ub` is the state below the incoming wave; the state above it is on the boundary.
pub fn reflect_at_boundary(
    ub: &State,
    incoming_family: Family,
    sigma_in: f64,
    theta: f64,
    g: &GasParams,
) -> Result<f64, RiemannError> {
    if !(2..=4).contains(&incoming_family) {
        return Err(RiemannError::Reflection(incoming_family));
    }
    check_state(ub, g)?;
    if sigma_in == 0.0 {
        return Ok(0.0);
    }
    let guess = if incoming_family == 4 { sigma_in } else { 0.0 };
    newton::solve_scalar(
        |s| wave_curve(ub, 1, s, g).map(|w| w.boundary_residual(theta, g)),
        guess,
        &opts(),
    )
    .map_err(RiemannError::Newton)
}

/// Hugoniot strengths `q` with `hugoniot_compose(u, q) = v`.
pub fn hugoniot_decompose(u: &State, v: &State, g: &GasParams) -> Result<[f64; 4], RiemannError> {
    check_state(u, g)?;
    check_state(v, g)?;
    if u == v {
        return Ok([0.0; 4]);
    }
    newton::solve(|q: &[f64; 4]| hugoniot_compose(u, q, g).map(|w| diff(&w, v)), [0.0; 4], &opts())
        .map_err(RiemannError::Newton)
}

/// First Hugoniot strength making `hugoniot_compose(u, (q1, q2, q3, q4))` satisfy the
/// boundary condition at `theta_prime`, where `u` satisfies it at `theta`.
pub fn boundary_hugoniot_q1(
    q2: f64,
    q3: f64,
    q4: f64,
    theta: f64,
    theta_prime: f64,
    u: &State,
    g: &GasParams,
) -> Result<f64, RiemannError> {
    u.check(g)?;
    let kt = boundary_coefficient(g)?;
    let guess = -q4 + kt * (theta_prime - theta);
    newton::solve_scalar(
        |q1| hugoniot_compose(u, &[q1, q2, q3, q4], g).map(|w| w.boundary_residual(theta_prime, g)),
        guess,
        &opts(),
    )
    .map_err(RiemannError::Newton)
}

/// Self-similar state of the solved fan at slope `zeta`.
pub fn sample_riemann_fan(sol: &RiemannSolution, zeta: f64, g: &GasParams) -> State {
    for j in 0..4 {
        match sol.speeds[j] {
            WaveSpeed::Jump(s) => {
                if zeta <= s {
                    return sol.states[j];
                }
            }
            WaveSpeed::Fan { foot, head } => {
                if zeta <= foot {
                    return sol.states[j];
                }
                if zeta < head {
                    return fan_state(&sol.states[j], j + 1, sol.strengths[j], zeta, g).unwrap_or(sol.states[j + 1]);
                }
            }
        }
    }
    sol.states[4]
}
