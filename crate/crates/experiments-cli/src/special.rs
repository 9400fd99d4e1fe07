use euler_core::{GasParams, State};
use front_tracking::default_lambda_hat;
use rayon::prelude::*;
use riemann::{sample_riemann_fan, solve_riemann, RiemannSolution};
use wave_curves::newton::{self, NewtonOptions};
use wave_curves::{wave_curve, WaveSpeed};

use crate::{fit_rate, CoefficientRow, ExperimentConfig, ExperimentError, RateFit, Scenario};

const FAN_NODES: usize = 64;

/// Data below and above the single front: `U_b = (1, 0, eps, p)` and the state on the
/// `tau = 0` 1-wave curve whose pressure exceeds `p` by `eps / a`.
pub fn special_data(eps: f64, g: &GasParams) -> Result<(State, State), ExperimentError> {
    let g0 = g.with_tau(0.0);
    let p = 1.0 / (g.gamma * g.a_inf * g.a_inf);
    let ub = State::new(1.0, 0.0, eps, p);
    if eps == 0.0 {
        return Ok((ub, ub));
    }
    let target = p + eps / g.a_inf;
    let guess = -0.5 * (g.gamma + 1.0) * eps;
    let opts = NewtonOptions { tol: 1e-15, max_iter: 50, fd_step: 1e-8, max_halvings: 6 };
    let s = newton::solve_scalar(|s| wave_curve(&ub, 1, s, &g0).map(|w| w.p - target), guess, &opts)
        .map_err(|f| ExperimentError::Solver(format!("special data: {}", f.reason)))?;
    Ok((ub, wave_curve(&ub, 1, s, &g0)?))
}

/// The data exactly as written, `U_a = (1 + a eps, eps / a, eps, p + eps / a)`.
pub fn literal_special_data(eps: f64, g: &GasParams) -> (State, State) {
    let a = g.a_inf;
    let p = 1.0 / (g.gamma * a * a);
    (State::new(1.0, 0.0, eps, p), State::new(1.0 + a * eps, eps / a, eps, p + eps / a))
}

fn fan_breaks(sol: &RiemannSolution, out: &mut Vec<f64>) {
    for s in &sol.speeds {
        out.push(s.lower());
        out.push(s.upper());
    }
}

fn in_fan(sol: &RiemannSolution, z: f64) -> bool {
    sol.speeds.iter().any(|s| matches!(s, WaveSpeed::Fan { foot, head } if z > *foot && z < *head))
}

/// `int |U(zeta) - V(zeta)| d zeta` over `[-half_width, half_width]`, exact on constant
/// pieces and by Gauss-Legendre quadrature inside rarefaction fans.
pub fn fan_l1_distance(a: &RiemannSolution, ga: &GasParams, b: &RiemannSolution, gb: &GasParams, half_width: f64) -> f64 {
    let mut pts = vec![-half_width, half_width];
    fan_breaks(a, &mut pts);
    fan_breaks(b, &mut pts);
    pts.retain(|z| z.abs() <= half_width);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let diff = |z: f64| (sample_riemann_fan(a, z, ga) - sample_riemann_fan(b, z, gb)).norm_l1();
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let m = 0.5 * (lo + hi);
        if !in_fan(a, m) && !in_fan(b, m) {
            acc += diff(m) * (hi - lo);
            continue;
        }
        let dz = (hi - lo) / FAN_NODES as f64;
        for k in 0..FAN_NODES {
            let c = lo + (k as f64 + 0.5) * dz;
            for (n, wt) in NODES.iter().zip(WEIGHTS) {
                acc += 0.5 * dz * wt * diff(c + 0.5 * dz * n);
            }
        }
    }
    acc
}

/// Both fans of the special problem at one `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoint {
    pub tau: f64,
    pub limit: RiemannSolution,
    pub scaled: RiemannSolution,
    pub literal_limit: RiemannSolution,
    pub literal_scaled: RiemannSolution,
    pub error: f64,
}

pub fn special_point(eps: f64, tau: f64, x: f64, g: &GasParams) -> Result<SpecialPoint, ExperimentError> {
    let g0 = g.with_tau(0.0);
    let gt = g.with_tau(tau);
    let (ub, ua) = special_data(eps, g)?;
    let limit = solve_riemann(&ub, &ua, &g0)?;
    let scaled = solve_riemann(&ub, &ua, &gt)?;
    let (lb, la) = literal_special_data(eps, g);
    let literal_limit = solve_riemann(&lb, &la, &g0)?;
    let literal_scaled = solve_riemann(&lb, &la, &gt)?;
    let half = default_lambda_hat(&gt)?.max(default_lambda_hat(&g0)?);
    let error = x * fan_l1_distance(&scaled, &gt, &limit, &g0, half);
    Ok(SpecialPoint { tau, limit, scaled, literal_limit, literal_scaled, error })
}

/// Rate fit and coefficient table of the special solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialReport {
    pub eps: f64,
    pub x: f64,
    pub points: Vec<SpecialPoint>,
    pub fit: RateFit,
    pub rows: Vec<CoefficientRow>,
}

/// Closed-form leading coefficient of `E / (eps x tau^2)`.
pub fn special_error_coefficient(a: f64) -> f64 {
    (9.0 * a.powi(3) + 10.0 * a * a + 9.0 * a + 6.0) / (4.0 * a.powi(4))
}

fn coefficient_rows(eps: f64, x: f64, pt: &SpecialPoint, g: &GasParams) -> Vec<CoefficientRow> {
    let a = g.a_inf;
    let s0 = pt.limit.strengths[0];
    let t2 = pt.tau * pt.tau;
    let st = pt.scaled.strengths;
    let lt = pt.literal_scaled.strengths;
    let tag = |name: &str| format!("{name}@tau={}", pt.tau);
    let mut rows = vec![
        CoefficientRow::new(tag("sigma_alpha1_over_eps"), s0 / eps, -0.5 * (g.gamma + 1.0)),
        CoefficientRow::new(tag("sigma_beta1_correction"), (st[0] - s0) / (s0 * t2), 7.0 / (4.0 * a * a)),
        CoefficientRow::new(tag("sigma_beta2_over_sigma_alpha1_tau2"), st[1] / (s0 * t2), 0.0),
        CoefficientRow::new(
            tag("sigma_beta3_over_sigma_alpha1_tau2"),
            st[2] / (s0 * t2),
            -4.0 * (a + 1.0) / ((g.gamma + 1.0) * a),
        ),
        CoefficientRow::new(tag("sigma_beta4_over_sigma_alpha1_tau2"), st[3] / (s0 * t2), 1.0 / (4.0 * a * a)),
        CoefficientRow::new(tag("E_over_eps_x_tau2"), pt.error / (eps * x * t2), special_error_coefficient(a)),
    ];
    let l0 = pt.literal_limit.strengths[0];
    let extra = pt.literal_limit.strengths[1..].iter().map(|s| s.abs()).sum::<f64>();
    rows.push(CoefficientRow::new(tag("literal_sigma_alpha1_over_eps"), l0 / eps, -0.5 * (g.gamma + 1.0)));
    rows.push(CoefficientRow::new(tag("literal_limit_extra_waves_over_eps"), extra / eps, 0.0));
    rows.push(CoefficientRow::new(
        tag("literal_sigma_beta3_over_sigma_alpha1_tau2"),
        (lt[2] - pt.literal_limit.strengths[2]) / (l0 * t2),
        -4.0 * (a + 1.0) / ((g.gamma + 1.0) * a),
    ));
    rows
}

/// Solves the special problem for every `tau` of the grid and tabulates the coefficients.
pub fn special_report(eps: f64, taus: &[f64], x: f64, g: &GasParams) -> Result<SpecialReport, ExperimentError> {
    if !(eps.abs() <= 1e-2) {
        return Err(ExperimentError::Config(format!("eps = {eps} must satisfy |eps| <= 1e-2")));
    }
    let points: Vec<SpecialPoint> =
        taus.par_iter().map(|&t| special_point(eps, t, x, g)).collect::<Result<_, _>>()?;
    let errors: Vec<f64> = points.iter().map(|p| p.error).collect();
    let fit = fit_rate(taus, &errors, eps * x)?;
    let rows = if eps == 0.0 { vec![] } else { points.iter().flat_map(|p| coefficient_rows(eps, x, p, g)).collect() };
    Ok(SpecialReport { eps, x, points, fit, rows })
}

pub fn run_special_solution(cfg: &ExperimentConfig) -> Result<SpecialReport, ExperimentError> {
    if cfg.scenario != Scenario::Special {
        return Err(ExperimentError::Config("run_special_solution needs scenario = special".into()));
    }
    special_report(cfg.params.eps, &cfg.tau_grid, cfg.x_station, &cfg.gas.with_tau(0.0)?)
}
