//! Convergence, special-solution and stability experiments with CSV output.

mod config;
mod special;
mod sweep;

use std::io::{self, Write};

use front_tracking::EngineError;
use functionals::FunctionalError;
use riemann::RiemannError;
use thiserror::Error;
use wave_curves::CurveError;

pub use config::{EngineSettings, ExperimentConfig, GasConfig, Scenario, ScenarioParams};
pub use special::{
    fan_l1_distance, literal_special_data, run_special_solution, special_data, special_error_coefficient, special_point,
    special_report, SpecialPoint, SpecialReport,
};
pub use sweep::{
    run_convergence, run_stability, scenario_problem, simulate, station_distance, stepped_data, StabilityCase,
    StabilityReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

impl ExperimentError {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Solver(_) => 3,
        }
    }
}

impl From<EngineError> for ExperimentError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config(m) => ExperimentError::Config(m),
            other => ExperimentError::Solver(other.to_string()),
        }
    }
}

impl From<RiemannError> for ExperimentError {
    fn from(e: RiemannError) -> Self {
        ExperimentError::Solver(e.to_string())
    }
}

impl From<CurveError> for ExperimentError {
    fn from(e: CurveError) -> Self {
        ExperimentError::Solver(e.to_string())
    }
}

impl From<FunctionalError> for ExperimentError {
    fn from(e: FunctionalError) -> Self {
        ExperimentError::Solver(e.to_string())
    }
}

/// Errors against `tau` with the least-squares fit of `log E = slope log tau + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub taus: Vec<f64>,
    pub errors: Vec<f64>,
    /// `NaN` when fewer than two errors are positive.
    pub slope: f64,
    pub intercept: f64,
    /// `E / (scale tau^2)` with `scale = eps x`.
    pub coefficients: Vec<f64>,
}

impl RateFit {
    /// `(max - min) / max` of the leading coefficients.
    pub fn plateau_spread(&self) -> f64 {
        let hi = self.coefficients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.coefficients.iter().copied().fold(f64::INFINITY, f64::min);
        if hi > 0.0 {
            (hi - lo) / hi
        } else {
            0.0
        }
    }
}

pub fn fit_rate(taus: &[f64], errors: &[f64], scale: f64) -> Result<RateFit, ExperimentError> {
    if taus.len() != errors.len() || taus.is_empty() {
        return Err(ExperimentError::Config("rate fit needs one error per tau".into()));
    }
    if errors.iter().any(|e| !(*e >= 0.0)) {
        return Err(ExperimentError::Solver("negative or undefined error in rate fit".into()));
    }
    let pts: Vec<(f64, f64)> =
        taus.iter().zip(errors).filter(|(_, e)| **e > 0.0).map(|(t, e)| (t.ln(), e.ln())).collect();
    let (slope, intercept) = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let s = sxy / sxx;
        (s, my - s * mx)
    } else {
        (f64::NAN, f64::NAN)
    };
    let coefficients = taus.iter().zip(errors).map(|(t, e)| if scale == 0.0 { 0.0 } else { e / (scale * t * t) }).collect();
    Ok(RateFit { taus: taus.to_vec(), errors: errors.to_vec(), slope, intercept, coefficients })
}

/// Measured coefficient next to its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    pub name: String,
    pub measured: f64,
    pub closed_form: f64,
    /// Relative error, or the absolute error when the closed form vanishes.
    pub rel_err: f64,
}

impl CoefficientRow {
    pub fn new(name: String, measured: f64, closed_form: f64) -> Self {
        let d = (measured - closed_form).abs();
        let rel_err = if closed_form == 0.0 { d } else { d / closed_form.abs() };
        CoefficientRow { name, measured, closed_form, rel_err }
    }
}

pub fn write_rate_csv(fit: &RateFit, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "tau,E,E_over_eps_x_tau2")?;
    for ((t, e), c) in fit.taus.iter().zip(&fit.errors).zip(&fit.coefficients) {
        writeln!(w, "{t},{e},{c}")?;
    }
    Ok(())
}

pub fn write_coeffs_csv(rows: &[CoefficientRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "name,measured,closed_form,rel_err")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.name, r.measured, r.closed_form, r.rel_err)?;
    }
    Ok(())
}

pub fn write_stability_csv(report: &StabilityReport, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "case,input_delta,output_delta,ratio")?;
    for c in &report.cases {
        writeln!(w, "{},{},{},{}", c.name, c.input_delta, c.output_delta, c.ratio)?;
    }
    Ok(())
}
