use crate::state::{DomainError, GasParams, State};

pub type Mat4 = [[f64; 4]; 4];

/// Conservative fluxes in the marching (`fx`) and transverse (`fy`) directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPair {
    pub fx: [f64; 4],
    pub fy: [f64; 4],
}

// rho*B = rho*k + gamma/(gamma-1) p with k = u + v^2/2 + tau^2 u^2/2, which keeps
// every flux component polynomial in (rho, u, v, p).
#[inline]
fn kinetic(s: &State, t2: f64) -> f64 {
    s.u + 0.5 * s.v * s.v + 0.5 * t2 * s.u * s.u
}

pub(crate) fn fluxes_unchecked(s: &State, g: &GasParams) -> FluxPair {
    let t2 = g.tau2();
    let w = 1.0 + t2 * s.u;
    let k = kinetic(s, t2);
    let gg = g.gamma / (g.gamma - 1.0);
    let m = s.rho * w;
    FluxPair {
        fx: [m, m * s.u + s.p, m * s.v, m * k + gg * s.p * w],
        fy: [
            s.rho * s.v,
            s.rho * s.u * s.v,
            s.rho * s.v * s.v + s.p,
            s.rho * s.v * k + gg * s.p * s.v,
        ],
    }
}

pub fn fluxes(s: &State, g: &GasParams) -> Result<FluxPair, DomainError> {
    s.check(g)?;
    Ok(fluxes_unchecked(s, g))
}

/// Analytic Jacobians d fx / dU and d fy / dU with U = (rho, u, v, p).
pub fn flux_jacobians(s: &State, g: &GasParams) -> (Mat4, Mat4) {
    let t2 = g.tau2();
    let State { rho, u, v, p } = *s;
    let w = 1.0 + t2 * u;
    let k = kinetic(s, t2);
    let gg = g.gamma / (g.gamma - 1.0);
    let a = [
        [w, rho * t2, 0.0, 0.0],
        [u * w, rho * w + rho * u * t2, 0.0, 1.0],
        [v * w, rho * v * t2, rho * w, 0.0],
        [w * k, rho * t2 * k + rho * w * w + gg * t2 * p, rho * w * v, gg * w],
    ];
    let b = [
        [v, 0.0, rho, 0.0],
        [u * v, rho * v, rho * u, 0.0],
        [v * v, 0.0, 2.0 * rho * v, 1.0],
        [v * k, rho * v * w, rho * k + rho * v * v + gg * p, gg * v],
    ];
    (a, b)
}

/// Entropy pair (eta_x, eta_y) = (rho^(1-gamma) p (1+tau^2 u), v rho^(1-gamma) p).
pub fn entropy_pair(s: &State, g: &GasParams) -> Result<(f64, f64), DomainError> {
    s.check(g)?;
    let e = s.rho.powf(1.0 - g.gamma) * s.p;
    Ok((e * s.w(g), s.v * e))
}

/// Rankine-Hugoniot residual s [fx] - [fy] with jumps taken above minus below.
pub fn rh_residual(below: &State, above: &State, speed: f64, g: &GasParams) -> [f64; 4] {
    let fb = fluxes_unchecked(below, g);
    let fa = fluxes_unchecked(above, g);
    let mut r = [0.0; 4];
    for i in 0..4 {
        r[i] = speed * (fa.fx[i] - fb.fx[i]) - (fa.fy[i] - fb.fy[i]);
    }
    r
}
