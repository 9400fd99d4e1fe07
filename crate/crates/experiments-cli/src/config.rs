use std::path::{Path, PathBuf};

use euler_core::{GasParams, State};
use front_tracking::EngineConfig;
use riemann::{ANGLE_TRUST, STATE_TRUST};
use serde::{Deserialize, Serialize};

use crate::ExperimentError;

/// Gas constants; `tau` is supplied per sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    pub gamma: f64,
    pub a_inf: f64,
}

impl Default for GasConfig {
    fn default() -> Self {
        GasConfig { gamma: 1.4, a_inf: 2.0 }
    }
}

impl GasConfig {
    pub fn with_tau(&self, tau: f64) -> Result<GasParams, ExperimentError> {
        GasParams::new(self.gamma, self.a_inf, tau).map_err(|e| ExperimentError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSettings {
    pub h: f64,
    pub nu: u32,
    pub rho_threshold: Option<f64>,
    pub lambda_hat: Option<f64>,
    pub x_end: f64,
    pub seed: u64,
    pub max_events: usize,
}

impl Default for EngineSettings {
    fn default() -> Self {
        let d = EngineConfig::default();
        EngineSettings {
            h: d.h,
            nu: d.nu,
            rho_threshold: d.rho_threshold,
            lambda_hat: d.lambda_hat,
            x_end: d.x_end,
            seed: d.seed,
            max_events: d.max_events,
        }
    }
}

impl EngineSettings {
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            h: self.h,
            nu: self.nu,
            rho_threshold: self.rho_threshold,
            lambda_hat: self.lambda_hat,
            x_end: self.x_end,
            seed: self.seed,
            max_events: self.max_events,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Special,
    Wedge,
    RiemannPair,
    Stability,
}

/// Scenario parameters; fields unused by a scenario are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioParams {
    /// Vertical velocity of the special data.
    pub eps: f64,
    /// Compressive wedge angle.
    pub wedge_angle: f64,
    /// Amplitude of the three-step density and pressure perturbation.
    pub amplitude: f64,
    /// Corner-angle change of boundary perturbations.
    pub boundary_delta: f64,
    /// Number of perturbations of each kind in the stability grid.
    pub cases: usize,
    /// Position of the initial jump for the two-state scenarios.
    pub jump_y: f64,
    pub below: Option<[f64; 4]>,
    pub above: Option<[f64; 4]>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            eps: 1e-3,
            wedge_angle: 0.01,
            amplitude: 1e-3,
            boundary_delta: 1e-3,
            cases: 4,
            jump_y: -0.5,
            below: None,
            above: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub gas: GasConfig,
    pub tau_grid: Vec<f64>,
    #[serde(default)]
    pub engine: EngineSettings,
    pub scenario: Scenario,
    #[serde(default)]
    pub params: ScenarioParams,
    #[serde(default = "default_station")]
    pub x_station: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_station() -> f64 {
    1.0
}

fn bad(msg: String) -> Result<(), ExperimentError> {
    Err(ExperimentError::Config(msg))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults of the wedge convergence study.
    pub fn wedge_default() -> Self {
        ExperimentConfig {
            gas: GasConfig::default(),
            tau_grid: vec![0.1, 0.05, 0.025],
            engine: EngineSettings::default(),
            scenario: Scenario::Wedge,
            params: ScenarioParams::default(),
            x_station: 1.0,
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.gas.with_tau(0.0)?;
        if self.tau_grid.is_empty() {
            return bad("tau_grid must not be empty".into());
        }
        for &t in &self.tau_grid {
            if !(t > 0.0 && t < self.gas.a_inf) {
                return bad(format!("tau = {t} must lie in (0, a_inf)"));
            }
        }
        self.engine.engine_config().validate().map_err(|e| ExperimentError::Config(e.to_string()))?;
        if !(self.x_station > 0.0 && self.x_station <= self.engine.x_end) {
            return bad(format!("x_station = {} must lie in (0, x_end]", self.x_station));
        }
        let p = &self.params;
        if !(p.eps.abs() <= 1e-2) {
            return bad(format!("eps = {} must satisfy |eps| <= 1e-2", p.eps));
        }
        if !(p.wedge_angle.abs() + p.boundary_delta.abs() < ANGLE_TRUST) {
            return bad("wedge_angle and boundary_delta exceed the angle trust bound".into());
        }
        if !(p.amplitude.abs() * 1.5 <= STATE_TRUST) {
            return bad(format!("amplitude = {} exceeds the state trust region", p.amplitude));
        }
        if !(p.jump_y < 0.0) {
            return bad("jump_y must lie below the wall".into());
        }
        if self.scenario == Scenario::Stability && p.cases == 0 {
            return bad("stability needs at least one case".into());
        }
        if self.scenario == Scenario::RiemannPair {
            let g = self.gas.with_tau(0.0)?;
            for (name, s) in [("below", p.below), ("above", p.above)] {
                let Some(s) = s else {
                    return bad(format!("riemann-pair needs params.{name}"));
                };
                if !riemann::in_trust_region(&State::from_array(s), &g) {
                    return bad(format!("params.{name} is outside the state trust region"));
                }
            }
        }
        Ok(())
    }
}
