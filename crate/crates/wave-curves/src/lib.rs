//! Elementary wave curves, Hugoniot loci and rarefaction fans.
//!
//! Strengths of the genuinely nonlinear families are measured by the change of the
//! characteristic slope along the curve, so `lambda_j(Phi_j(sigma; U)) - lambda_j(U) = sigma`
//! on both branches.

pub mod newton;
pub mod ode;

use euler_core::{
    check_family, eigenvalue, eigenvalue_gradient, eigenvector, flux_jacobians, DomainError, Family, GasParams, State,
};
use thiserror::Error;

pub use newton::{NewtonFailure, NewtonOptions};

/// Radius of the strength trust region.
pub const DELTA_TRUST: f64 = 0.1;

const ODE_RTOL: f64 = 1e-12;
const ODE_ATOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("strength {0} outside the trust region |sigma| <= {DELTA_TRUST}")]
    Trust(f64),
    #[error("Rankine-Hugoniot Newton failed after {} iterations (residual {:e}): {}", .0.iterations, .0.residual, .0.reason)]
    Newton(NewtonFailure),
    #[error("rarefaction integration failed: {0}")]
    Ode(String),
    #[error("slope {zeta} outside fan range [{foot}, {head}]")]
    FanRange { zeta: f64, foot: f64, head: f64 },
    #[error("family {0} has no fan")]
    NotGenuinelyNonlinear(Family),
}

/// Wave family including the lumped non-physical family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveFamily {
    Physical(Family),
    NonPhysical,
}

impl WaveFamily {
    /// 1..=4 for physical families, 5 for the non-physical one.
    pub fn index(self) -> usize {
        match self {
            WaveFamily::Physical(j) => j,
            WaveFamily::NonPhysical => 5,
        }
    }

    pub fn is_physical(self) -> bool {
        matches!(self, WaveFamily::Physical(_))
    }

    pub fn is_genuinely_nonlinear(self) -> bool {
        matches!(self, WaveFamily::Physical(1) | WaveFamily::Physical(4))
    }

    pub fn is_contact(self) -> bool {
        matches!(self, WaveFamily::Physical(2) | WaveFamily::Physical(3))
    }
}

impl std::fmt::Display for WaveFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WaveFamily::Physical(j) => write!(f, "{j}"),
            WaveFamily::NonPhysical => write!(f, "NP"),
        }
    }
}

/// Propagation slope of an elementary wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveSpeed {
    /// Shock or contact discontinuity.
    Jump(f64),
    /// Centered rarefaction between the foot and head characteristic slopes.
    Fan { foot: f64, head: f64 },
}

impl WaveSpeed {
    pub fn lower(&self) -> f64 {
        match *self {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { foot, .. } => foot,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { head, .. } => head,
        }
    }
}

fn check_trust(sigma: f64) -> Result<(), CurveError> {
    if !(sigma.abs() <= DELTA_TRUST) {
        return Err(CurveError::Trust(sigma));
    }
    Ok(())
}

fn contact_curve(u: &State, family: Family, sigma: f64, g: &GasParams) -> State {
    if family == 3 {
        return State::new(u.rho + sigma, u.u, u.v, u.p);
    }
    let t2 = g.tau2();
    if t2 == 0.0 {
        return State::new(u.rho, u.u + sigma, u.v, u.p);
    }
    let e = (t2 * sigma).exp();
    State::new(u.rho, u.u * e + (t2 * sigma).exp_m1() / t2, u.v * e, u.p)
}

/// Integral curve of `r_j` through `u`, followed for parameter `sigma` of either sign.
pub fn integral_curve(u: &State, family: Family, sigma: f64, g: &GasParams) -> Result<State, CurveError> {
    check_family(family)?;
    u.check(g)?;
    if family == 2 || family == 3 {
        let out = contact_curve(u, family, sigma, g);
        out.check(g)?;
        return Ok(out);
    }
    let y = ode::dopri45(
        |y: &[f64; 4]| eigenvector(&State::from_array(*y), g, family),
        u.to_array(),
        sigma,
        ODE_RTOL,
        ODE_ATOL,
    )
    .map_err(|e| match e {
        ode::OdeError::Rhs(d) => CurveError::Domain(d),
        other => CurveError::Ode(format!("{other:?}")),
    })?;
    Ok(State::from_array(y))
}

const GL2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];
const GL3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

fn shifted(u: &[f64; 4], d: &[f64; 4], t: f64) -> State {
    State::new(u[0] + t * d[0], u[1] + t * d[1], u[2] + t * d[2], u[3] + t * d[3])
}

/// Residual of the normalized Hugoniot system in the unknowns `(w, s)` with jump `sigma w`.
fn hugoniot_residual(u: &State, lam0: f64, family: Family, sigma: f64, z: &[f64; 5], g: &GasParams) -> Result<[f64; 5], DomainError> {
    let w = [z[0], z[1], z[2], z[3]];
    let s = z[4];
    let base = u.to_array();
    let d = [sigma * w[0], sigma * w[1], sigma * w[2], sigma * w[3]];
    let mut out = [0.0; 5];
    // Flux components are quartic, so two Gauss points average the Jacobians exactly.
    for &t in &GL2 {
        let (a, b) = flux_jacobians(&shifted(&base, &d, t), g);
        for i in 0..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += (s * a[i][k] - b[i][k]) * w[k];
            }
            out[i] += 0.5 * acc;
        }
    }
    let end = shifted(&base, &d, 1.0);
    end.check(g)?;
    out[4] = if sigma.abs() > 1e-3 {
        (eigenvalue(&end, g, family)? - lam0) / sigma - 1.0
    } else {
        let mut acc = 0.0;
        for &(t, wt) in &GL3 {
            let grad = eigenvalue_gradient(&shifted(&base, &d, t), g, family)?;
            acc += wt * (0..4).map(|i| grad[i] * w[i]).sum::<f64>();
        }
        acc - 1.0
    };
    Ok(out)
}

/// Point on the Hugoniot locus of family 1 or 4 through `u` with slope change `q`,
/// together with its Rankine-Hugoniot slope. Both signs of `q` are accepted.
pub fn hugoniot_point(u: &State, family: Family, q: f64, g: &GasParams) -> Result<(State, f64), CurveError> {
    check_family(family)?;
    if family == 2 || family == 3 {
        return Err(CurveError::NotGenuinelyNonlinear(family));
    }
    let lam0 = eigenvalue(u, g, family)?;
    if q == 0.0 {
        return Ok((*u, lam0));
    }
    let r = eigenvector(u, g, family)?;
    let z0 = [r[0], r[1], r[2], r[3], lam0 + 0.5 * q];
    let opts = NewtonOptions { tol: 1e-13, ..NewtonOptions::default() };
    let z = newton::solve(|z: &[f64; 5]| hugoniot_residual(u, lam0, family, q, z, g), z0, &opts)
        .map_err(CurveError::Newton)?;
    let out = State::new(u.rho + q * z[0], u.u + q * z[1], u.v + q * z[2], u.p + q * z[3]);
    out.check(g)?;
    Ok((out, z[4]))
}

/// Rankine-Hugoniot slope of the family-1 or family-4 wave of strength `sigma`.
pub fn shock_speed(u: &State, family: Family, sigma: f64, g: &GasParams) -> Result<f64, CurveError> {
    check_trust(sigma)?;
    Ok(hugoniot_point(u, family, sigma, g)?.1)
}

/// Admissible elementary wave curve `Phi_j(sigma; u)`.
pub fn wave_curve(u: &State, family: Family, sigma: f64, g: &GasParams) -> Result<State, CurveError> {
    Ok(elementary_wave(u, family, sigma, g)?.0)
}

/// End state and propagation slope of the admissible wave of strength `sigma`.
pub fn elementary_wave(u: &State, family: Family, sigma: f64, g: &GasParams) -> Result<(State, WaveSpeed), CurveError> {
    check_family(family)?;
    check_trust(sigma)?;
    let lam0 = eigenvalue(u, g, family)?;
    if sigma == 0.0 {
        return Ok((*u, WaveSpeed::Jump(lam0)));
    }
    match family {
        2 | 3 => {
            let out = contact_curve(u, family, sigma, g);
            out.check(g)?;
            Ok((out, WaveSpeed::Jump(lam0)))
        }
        _ if sigma > 0.0 => {
            let out = integral_curve(u, family, sigma, g)?;
            let head = eigenvalue(&out, g, family)?;
            Ok((out, WaveSpeed::Fan { foot: lam0, head }))
        }
        _ => {
            let (out, s) = hugoniot_point(u, family, sigma, g)?;
            Ok((out, WaveSpeed::Jump(s)))
        }
    }
}

/// Composition `Phi_4(s4; Phi_3(s3; Phi_2(s2; Phi_1(s1; u))))`.
pub fn compose_wave_curves(u: &State, sigmas: &[f64; 4], g: &GasParams) -> Result<State, CurveError> {
    Ok(compose_states(u, sigmas, g)?[4])
}

/// All five constant states of the composition, starting with `u`.
pub fn compose_states(u: &State, sigmas: &[f64; 4], g: &GasParams) -> Result<[State; 5], CurveError> {
    let mut states = [*u; 5];
    for j in 0..4 {
        states[j + 1] = wave_curve(&states[j], j + 1, sigmas[j], g)?;
    }
    Ok(states)
}

/// Hugoniot curve through `u`: contacts as in `wave_curve`, families 1 and 4 on the
/// full Rankine-Hugoniot locus with no admissibility restriction.
pub fn hugoniot_curve(u: &State, family: Family, q: f64, g: &GasParams) -> Result<State, CurveError> {
    check_family(family)?;
    check_trust(q)?;
    if family == 2 || family == 3 {
        u.check(g)?;
        let out = contact_curve(u, family, q, g);
        out.check(g)?;
        return Ok(out);
    }
    Ok(hugoniot_point(u, family, q, g)?.0)
}

pub fn hugoniot_compose(u: &State, qs: &[f64; 4], g: &GasParams) -> Result<State, CurveError> {
    let mut s = *u;
    for j in 0..4 {
        s = hugoniot_curve(&s, j + 1, qs[j], g)?;
    }
    Ok(s)
}

/// State inside the centered rarefaction fan of strength `sigma_total` at slope `zeta`.
pub fn fan_state(u: &State, family: Family, sigma_total: f64, zeta: f64, g: &GasParams) -> Result<State, CurveError> {
    check_family(family)?;
    if family == 2 || family == 3 {
        return Err(CurveError::NotGenuinelyNonlinear(family));
    }
    check_trust(sigma_total)?;
    let foot = eigenvalue(u, g, family)?;
    let head = foot + sigma_total;
    let slack = 1e-12 * (1.0 + foot.abs());
    if !(sigma_total >= 0.0) || zeta < foot - slack || zeta > head + slack {
        return Err(CurveError::FanRange { zeta, foot, head });
    }
    let s = (zeta - foot).clamp(0.0, sigma_total);
    let s = if sigma_total - s <= slack { sigma_total } else { s };
    integral_curve(u, family, s, g)
}
