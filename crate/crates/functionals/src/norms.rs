use euler_core::{entropy_pair, GasParams, State};
use front_tracking::{Profile, SolutionSlice, Trajectory, WaveFamily};
use riemann::RiemannError;

use crate::FunctionalError;

fn value_at(p: &Profile, y: f64, fill: &State) -> State {
    if y > p.top {
        *fill
    } else {
        p.at(y)
    }
}

/// Exact `L1` distance on `[lo, hi]`, summing componentwise absolute differences.
/// Above its wall a profile is extended by `fill`.
pub fn l1_distance(p: &Profile, q: &Profile, lo: f64, hi: f64, fill: &State) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let mut pts: Vec<f64> = p
        .breaks
        .iter()
        .chain(q.breaks.iter())
        .chain([p.top, q.top].iter())
        .copied()
        .filter(|&y| y > lo && y < hi)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2)
        .map(|w| {
            let m = 0.5 * (w[0] + w[1]);
            (value_at(p, m, fill) - value_at(q, m, fill)).norm_l1() * (w[1] - w[0])
        })
        .sum()
}

/// Scalar or vector quantity whose variation in `y` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    State,
    FlowSlope,
    Pressure,
}

pub fn bv_total_variation(slice: &SolutionSlice, quantity: Quantity, g: &GasParams) -> f64 {
    slice
        .states
        .windows(2)
        .map(|w| match quantity {
            Quantity::State => (w[1] - w[0]).norm_l1(),
            Quantity::FlowSlope => (w[1].flow_slope(g) - w[0].flow_slope(g)).abs(),
            Quantity::Pressure => (w[1].p - w[0].p).abs(),
        })
        .sum()
}

/// Flow slope and pressure sampled along a curve `y = Y(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSlopeTrace {
    pub xs: Vec<f64>,
    pub slopes: Vec<f64>,
    pub pressures: Vec<f64>,
    pub slope_l1: f64,
    pub slope_bv: f64,
    pub pressure_l1: f64,
    pub pressure_bv: f64,
}

/// Traces `(v / (1 + tau^2 u), p)` along `curve` at the midpoints of `samples` cells of `[x0, x1]`.
pub fn flow_slope_trace(
    traj: &Trajectory,
    curve: impl Fn(f64) -> f64,
    x0: f64,
    x1: f64,
    samples: usize,
) -> Result<FlowSlopeTrace, FunctionalError> {
    let n = samples.max(1);
    let dx = (x1 - x0) / n as f64;
    let mut xs = Vec::with_capacity(n);
    let mut slopes = Vec::with_capacity(n);
    let mut pressures = Vec::with_capacity(n);
    for i in 0..n {
        let x = x0 + (i as f64 + 0.5) * dx;
        let y = curve(x);
        if y > traj.boundary.g_at(x) {
            return Err(FunctionalError::OutsideDomain(x));
        }
        let u = traj.sample(x)?.at(y);
        xs.push(x);
        slopes.push(u.flow_slope(&traj.gas));
        pressures.push(u.p);
    }
    let l1 = |v: &[f64]| v.iter().map(|a| a.abs() * dx.abs()).sum::<f64>();
    let bv = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    Ok(FlowSlopeTrace {
        slope_l1: l1(&slopes),
        slope_bv: bv(&slopes),
        pressure_l1: l1(&pressures),
        pressure_bv: bv(&pressures),
        xs,
        slopes,
        pressures,
    })
}

/// Entropy production `s [eta_x] - [eta_y]` of one physical front at its exact speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontProduction {
    pub index: usize,
    pub family: WaveFamily,
    pub sigma: f64,
    pub production: f64,
}

pub fn entropy_production_check(slice: &SolutionSlice, g: &GasParams) -> Result<Vec<FrontProduction>, FunctionalError> {
    let mut out = vec![];
    for (i, f) in slice.fronts.iter().enumerate() {
        if !f.family.is_physical() {
            continue;
        }
        let (exl, eyl) = entropy_pair(&slice.states[i], g).map_err(RiemannError::from)?;
        let (exh, eyh) = entropy_pair(&slice.states[i + 1], g).map_err(RiemannError::from)?;
        out.push(FrontProduction {
            index: i,
            family: f.family,
            sigma: f.sigma,
            production: f.nominal_speed * (exh - exl) - (eyh - eyl),
        });
    }
    Ok(out)
}
