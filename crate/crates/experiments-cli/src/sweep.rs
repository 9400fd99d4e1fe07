use euler_core::{GasParams, State};
use front_tracking::{run, BoundaryPolyline, PiecewiseData, Profile, Trajectory};
use functionals::l1_distance;
use rayon::prelude::*;

use crate::special::special_data;
use crate::{fit_rate, ExperimentConfig, ExperimentError, RateFit, Scenario};

const STEP_JUMPS: [f64; 3] = [-0.6, -0.4, -0.2];

/// Background below `-0.6` with three density and pressure steps of relative size `weights`.
pub fn stepped_data(g: &GasParams, amplitude: f64, weights: [f64; 3]) -> Result<PiecewiseData, ExperimentError> {
    let b = g.background();
    let s = |c: f64| State::new(b.rho + c * amplitude, b.u, b.v, b.p + c * amplitude);
    Ok(PiecewiseData::new(STEP_JUMPS.to_vec(), vec![b, s(weights[0]), s(weights[1]), s(weights[2])])?)
}

const BASE_WEIGHTS: [f64; 3] = [1.0, -1.0, 0.5];

fn segments(cfg: &ExperimentConfig) -> usize {
    (cfg.engine.x_end / cfg.engine.h).ceil().max(1.0) as usize + 1
}

/// Initial data and wall of the configured scenario at one `tau`.
pub fn scenario_problem(cfg: &ExperimentConfig, g: &GasParams) -> Result<(PiecewiseData, BoundaryPolyline), ExperimentError> {
    let p = &cfg.params;
    let h = cfg.engine.h;
    match cfg.scenario {
        Scenario::Wedge | Scenario::Stability => Ok((
            stepped_data(g, p.amplitude, BASE_WEIGHTS)?,
            BoundaryPolyline::wedge(p.wedge_angle, h, cfg.engine.x_end)?,
        )),
        Scenario::Special | Scenario::RiemannPair => {
            let (ub, ua) = if cfg.scenario == Scenario::Special {
                special_data(p.eps, g)?
            } else {
                let missing = || ExperimentError::Config("riemann-pair needs params.below and params.above".into());
                (State::from_array(p.below.ok_or_else(missing)?), State::from_array(p.above.ok_or_else(missing)?))
            };
            let theta = ua.flow_slope(g).atan();
            let data = PiecewiseData::new(vec![p.jump_y], vec![ub, ua])?;
            Ok((data, BoundaryPolyline::from_thetas(h, &vec![theta; segments(cfg)])?))
        }
    }
}

/// One front-tracking run of the scenario per `tau` in the grid.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Vec<Trajectory>, ExperimentError> {
    cfg.tau_grid
        .par_iter()
        .map(|&t| {
            let g = cfg.gas.with_tau(t)?;
            let (data, b) = scenario_problem(cfg, &g)?;
            Ok(run(&data, &b, &cfg.engine.engine_config(), &g)?)
        })
        .collect()
}

/// `L1` distance at `x` over `[g_hat - 2 lambda x - 1, g_hat]`, both solutions extended by the background.
pub fn station_distance(a: &Trajectory, b: &Trajectory, x: f64) -> Result<f64, ExperimentError> {
    let pa = a.sample(x)?;
    let pb = b.sample(x)?;
    let top = pa.top.max(pb.top);
    let lam = a.lambda_hat.max(b.lambda_hat);
    Ok(l1_distance(&pa, &pb, top - 2.0 * lam * x - 1.0, top, &a.gas.background()))
}

fn tagged<T>(tau: f64, r: Result<T, ExperimentError>) -> Result<T, ExperimentError> {
    r.map_err(|e| match e {
        ExperimentError::Config(m) => ExperimentError::Config(m),
        ExperimentError::Solver(m) => ExperimentError::Solver(format!("run at tau = {tau}: {m}")),
    })
}

/// Error of each `tau` run against the `tau = 0` run at the station, with a log-log fit.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<RateFit, ExperimentError> {
    if cfg.scenario != Scenario::Wedge {
        return Err(ExperimentError::Config("run_convergence needs scenario = wedge".into()));
    }
    let ecfg = cfg.engine.engine_config();
    let mut taus = vec![0.0];
    taus.extend(&cfg.tau_grid);
    let runs: Vec<Result<Trajectory, ExperimentError>> = taus
        .par_iter()
        .map(|&t| {
            tagged(t, (|| {
                let g = cfg.gas.with_tau(t)?;
                let (data, b) = scenario_problem(cfg, &g)?;
                Ok(run(&data, &b, &ecfg, &g)?)
            })())
        })
        .collect();
    let mut runs = runs.into_iter();
    let limit = runs.next().expect("limit run")?;
    let mut errors = vec![];
    let mut failed = vec![];
    for (t, r) in cfg.tau_grid.iter().zip(runs) {
        match r.and_then(|tr| station_distance(&tr, &limit, cfg.x_station)) {
            Ok(e) => errors.push(e),
            Err(e) => failed.push(format!("{e} (tau = {t})")),
        }
    }
    if !failed.is_empty() {
        return Err(ExperimentError::Solver(format!(
            "sweep aborted after {} of {} points: {}",
            errors.len(),
            cfg.tau_grid.len(),
            failed.join("; ")
        )));
    }
    fit_rate(&cfg.tau_grid, &errors, cfg.params.amplitude * cfg.x_station)
}

/// One paired comparison of the stability grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCase {
    pub name: String,
    pub input_delta: f64,
    pub output_delta: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub tau: f64,
    pub cases: Vec<StabilityCase>,
    /// Largest ratio over the grid, the empirical Lipschitz constant.
    pub lipschitz: f64,
}

fn data_profile(d: &PiecewiseData) -> Profile {
    Profile { breaks: d.jumps.clone(), states: d.states.clone(), top: 0.0 }
}

struct Perturbation {
    name: String,
    weights: [f64; 3],
    corner: Option<usize>,
}

fn perturbations(cfg: &ExperimentConfig, corners: usize) -> Vec<Perturbation> {
    let n = cfg.params.cases;
    let mut out = vec![Perturbation { name: "zero".into(), weights: BASE_WEIGHTS, corner: None }];
    for j in 1..=n {
        let s = j as f64 / n as f64;
        let mut w = BASE_WEIGHTS;
        w[(j - 1) % 3] += s;
        let corner = 1 + (j * (corners - 1)) / (n + 1);
        out.push(Perturbation { name: format!("data-{j}"), weights: w, corner: None });
        out.push(Perturbation { name: format!("boundary-{j}"), weights: BASE_WEIGHTS, corner: Some(corner) });
        out.push(Perturbation { name: format!("mixed-{j}"), weights: w, corner: Some(corner) });
    }
    out
}

/// Ratios `|dU(x)| / (|dU0| + |dg'|)` over data, boundary and mixed perturbations of the base run.
pub fn run_stability(cfg: &ExperimentConfig) -> Result<StabilityReport, ExperimentError> {
    if cfg.scenario != Scenario::Stability {
        return Err(ExperimentError::Config("run_stability needs scenario = stability".into()));
    }
    let tau = cfg.tau_grid[0];
    let g = cfg.gas.with_tau(tau)?;
    let ecfg = cfg.engine.engine_config();
    let (data, b) = scenario_problem(cfg, &g)?;
    let base = run(&data, &b, &ecfg, &g)?;
    let x = cfg.x_station;
    let delta = cfg.params.boundary_delta;
    let cases: Vec<StabilityCase> = perturbations(cfg, b.corner_count())
        .par_iter()
        .map(|p| {
            let d = stepped_data(&g, cfg.params.amplitude, p.weights)?;
            let mut th = b.thetas.clone();
            if let Some(k) = p.corner {
                for t in &mut th[k..] {
                    *t += delta;
                }
            }
            let bp = BoundaryPolyline::from_thetas(b.h, &th)?;
            let other = run(&d, &bp, &ecfg, &g)?;
            let input = l1_distance(&data_profile(&data), &data_profile(&d), -10.0, 0.0, &g.background())
                + b.slope_l1_distance(&bp, 0.0, ecfg.x_end);
            let output = station_distance(&base, &other, x)?;
            let ratio = if input > 0.0 { output / input } else { 0.0 };
            Ok(StabilityCase { name: p.name.clone(), input_delta: input, output_delta: output, ratio })
        })
        .collect::<Result<_, ExperimentError>>()?;
    let lipschitz = cases.iter().map(|c| c.ratio).fold(0.0, f64::max);
    Ok(StabilityReport { tau, cases, lipschitz })
}
