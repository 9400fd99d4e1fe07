use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("invalid gas parameters: {0}")]
    Params(String),
    #[error("state violates positivity: {0}")]
    State(String),
    #[error("flow is not supersonic in x: (1+tau^2 u)^2 - tau^2 c^2 = {0}")]
    Subsonic(f64),
    #[error("family index {0} is not in 1..=4")]
    Family(usize),
}

/// Adiabatic exponent, similarity parameter and scaling parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
    pub a_inf: f64,
    pub tau: f64,
}

impl GasParams {
    pub fn new(gamma: f64, a_inf: f64, tau: f64) -> Result<Self, DomainError> {
        let g = GasParams { gamma, a_inf, tau };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(DomainError::Params(format!("gamma = {} must exceed 1", self.gamma)));
        }
        if !(self.a_inf > 0.0) || !self.a_inf.is_finite() {
            return Err(DomainError::Params(format!("a_inf = {} must be positive", self.a_inf)));
        }
        if !(self.tau >= 0.0) || self.tau >= self.a_inf {
            return Err(DomainError::Params(format!(
                "tau = {} must satisfy 0 <= tau < a_inf = {}",
                self.tau, self.a_inf
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn tau2(&self) -> f64 {
        self.tau * self.tau
    }

    /// Same gas with a different scaling parameter.
    pub fn with_tau(&self, tau: f64) -> Self {
        GasParams { tau, ..*self }
    }

    /// Uniform background state (1, 0, 0, 1/(gamma a^2)).
    pub fn background(&self) -> State {
        State::new(1.0, 0.0, 0.0, 1.0 / (self.gamma * self.a_inf * self.a_inf))
    }
}

/// Primitive state (rho, u, v, p).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl State {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        State { rho, u, v, p }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        State::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.u, self.v, self.p]
    }

    /// Horizontal mass-flux factor 1 + tau^2 u.
    #[inline]
    pub fn w(&self, g: &GasParams) -> f64 {
        1.0 + g.tau2() * self.u
    }

    pub fn sound_speed(&self, g: &GasParams) -> f64 {
        (g.gamma * self.p / self.rho).sqrt()
    }

    /// Flow slope v / (1 + tau^2 u).
    pub fn flow_slope(&self, g: &GasParams) -> f64 {
        self.v / self.w(g)
    }

    /// Residual of the slip condition (1 + tau^2 u) sin(theta) - v cos(theta).
    pub fn boundary_residual(&self, theta: f64, g: &GasParams) -> f64 {
        self.w(g) * theta.sin() - self.v * theta.cos()
    }

    pub fn check(&self, g: &GasParams) -> Result<(), DomainError> {
        let a = self.to_array();
        if a.iter().any(|x| !x.is_finite()) {
            return Err(DomainError::State(format!("non-finite component in {self}")));
        }
        if self.rho <= 0.0 || self.p <= 0.0 {
            return Err(DomainError::State(format!("vacuum or negative pressure in {self}")));
        }
        if self.w(g) <= 0.0 {
            return Err(DomainError::State(format!("1 + tau^2 u <= 0 in {self}")));
        }
        Ok(())
    }

    pub fn norm_l1(&self) -> f64 {
        self.rho.abs() + self.u.abs() + self.v.abs() + self.p.abs()
    }

    pub fn norm_l2(&self) -> f64 {
        (self.rho * self.rho + self.u * self.u + self.v * self.v + self.p * self.p).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.rho.abs().max(self.u.abs()).max(self.v.abs()).max(self.p.abs())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.rho, self.u, self.v, self.p)
    }
}

impl Add for State {
    type Output = State;
    fn add(self, o: State) -> State {
        State::new(self.rho + o.rho, self.u + o.u, self.v + o.v, self.p + o.p)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, o: State) -> State {
        State::new(self.rho - o.rho, self.u - o.u, self.v - o.v, self.p - o.p)
    }
}

impl Mul<State> for f64 {
    type Output = State;
    fn mul(self, s: State) -> State {
        State::new(self * s.rho, self * s.u, self * s.v, self * s.p)
    }
}

impl From<[f64; 4]> for State {
    fn from(a: [f64; 4]) -> State {
        State::from_array(a)
    }
}

impl From<State> for [f64; 4] {
    fn from(s: State) -> [f64; 4] {
        s.to_array()
    }
}
