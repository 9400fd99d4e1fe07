use euler_core::{eigenvalue, GasParams};
use front_tracking::{BoundaryPolyline, Front, SolutionSlice, Trajectory, WaveFamily};
use riemann::{boundary_hugoniot_q1, hugoniot_decompose};

use crate::glimm::interaction_potential;
use crate::FunctionalError;

/// Weights of the L1-equivalent stability functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovWeights {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa_c: f64,
    pub kappa_c_prime: f64,
    pub kappa_g: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
}

/// `(K_b, K_theta)` with `q1 = K_b q4 + K_theta (theta' - theta)` at the background.
pub fn boundary_hugoniot_coefficients(g: &GasParams) -> Result<(f64, f64), FunctionalError> {
    let u = g.background();
    let h = 1e-6;
    let q = |q4: f64, dt: f64| boundary_hugoniot_q1(0.0, 0.0, q4, 0.0, dt, &u, g);
    let kb = (q(h, 0.0)? - q(-h, 0.0)?) / (2.0 * h);
    let kt = (q(0.0, h)? - q(0.0, -h)?) / (2.0 * h);
    Ok((kb, kt))
}

impl LyapunovWeights {
    /// Fixed kappas with `w4` chosen by bisection on the boundary dissipation coefficient.
    pub fn background(g: &GasParams) -> Result<Self, FunctionalError> {
        let (kb, _) = boundary_hugoniot_coefficients(g)?;
        let lam4 = eigenvalue(&g.background(), g, 4).map_err(riemann::RiemannError::from)?;
        let coeff = |w4: f64| (kb.abs() - w4) * lam4;
        let (mut lo, mut hi) = (0.0, 1.0);
        while coeff(hi) >= 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if coeff(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w4 = 1.5 * hi;
        let w = LyapunovWeights {
            kappa1: 10.0,
            kappa2: 10.0,
            kappa3: 10.0,
            kappa_c: 10.0,
            kappa_c_prime: 10.0,
            kappa_g: 10.0 * w4,
            w2: 1.0,
            w3: 1.0,
            w4,
        };
        w.validate(g)?;
        Ok(w)
    }

    /// Coefficient of `|q4|` in the boundary term at the background; must be negative.
    pub fn boundary_dissipation(&self, g: &GasParams) -> Result<f64, FunctionalError> {
        let (kb, _) = boundary_hugoniot_coefficients(g)?;
        let lam4 = eigenvalue(&g.background(), g, 4).map_err(riemann::RiemannError::from)?;
        Ok((kb.abs() - self.w4) * lam4)
    }

    pub fn validate(&self, g: &GasParams) -> Result<(), FunctionalError> {
        let all = [
            self.kappa1,
            self.kappa2,
            self.kappa3,
            self.kappa_c,
            self.kappa_c_prime,
            self.kappa_g,
            self.w2,
            self.w3,
            self.w4,
        ];
        if all.iter().any(|v| !(*v > 0.0)) {
            return Err(FunctionalError::Weights("all Lyapunov weights must be positive".into()));
        }
        let d = self.boundary_dissipation(g)?;
        if !(d < 0.0) {
            return Err(FunctionalError::Weights(format!("boundary dissipation coefficient {d} is not negative")));
        }
        Ok(())
    }

    fn hat(&self, q: [f64; 4]) -> [f64; 4] {
        [q[0], self.w2 * q[1], self.w3 * q[2], self.w4 * q[3]]
    }
}

/// Bulk, boundary and total values of the functional at one station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovValue {
    pub bulk: f64,
    pub boundary: f64,
    pub total: f64,
}

struct Located {
    family: usize,
    sigma: f64,
    y: f64,
    from_u: bool,
}

fn locate(fronts: &[Front], x: f64, from_u: bool) -> impl Iterator<Item = Located> + '_ {
    fronts.iter().map(move |f| Located { family: f.family.index(), sigma: f.sigma, y: f.y_at(x), from_u })
}

/// Strength of the waves of both solutions approaching the `j`-th Hugoniot wave at `y`.
fn approaching_strength(all: &[Located], j: usize, y: f64, qj: f64) -> f64 {
    let gnl = j == 1 || j == 4;
    let mut a = 0.0;
    for f in all {
        let s = f.sigma.abs();
        if (f.y < y && f.family > j) || (f.y > y && f.family < j) {
            a += s;
        } else if gnl && f.family == j {
            let below = f.y < y;
            let counts = if qj < 0.0 { below == f.from_u } else { below != f.from_u };
            if counts {
                a += s;
            }
        }
    }
    a
}

fn fourth_family(s: &SolutionSlice) -> f64 {
    s.fronts.iter().filter(|f| f.family == WaveFamily::Physical(4)).map(|f| f.sigma.abs()).sum()
}

/// Weighted integral of the Hugoniot strengths between two slices up to the lower wall.
pub fn lyapunov_bulk(
    su: &SolutionSlice,
    bu: &BoundaryPolyline,
    sv: &SolutionSlice,
    bv: &BoundaryPolyline,
    w: &LyapunovWeights,
    g: &GasParams,
) -> Result<f64, FunctionalError> {
    if su.x != sv.x {
        return Err(FunctionalError::Station(su.x, sv.x));
    }
    let x = su.x;
    let pu = su.profile(bu.g_at(x));
    let pv = sv.profile(bv.g_at(x));
    let top = pu.top.min(pv.top);
    if hugoniot_decompose(&pu.bottom(), &pv.bottom(), g)?.iter().any(|q| *q != 0.0) {
        return Err(FunctionalError::FarField);
    }
    let all: Vec<Located> = locate(&su.fronts, x, true).chain(locate(&sv.fronts, x, false)).collect();
    let common = 1.0
        + w.kappa2 * (interaction_potential(su) + interaction_potential(sv))
        + w.kappa3 * (fourth_family(su) + fourth_family(sv))
        + w.kappa_c * bu.remaining_turning(su.next_corner)
        + w.kappa_c_prime * bv.remaining_turning(sv.next_corner);
    let mut pts: Vec<f64> = pu.breaks.iter().chain(pv.breaks.iter()).copied().filter(|&y| y < top).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.push(top);
    let mut acc = 0.0;
    for win in pts.windows(2) {
        let (a, b) = (win[0], win[1]);
        if !(b > a) {
            continue;
        }
        let m = 0.5 * (a + b);
        let q = hugoniot_decompose(&pu.at(m), &pv.at(m), g)?;
        let qh = w.hat(q);
        for j in 0..4 {
            if qh[j] != 0.0 {
                let wj = common + w.kappa1 * approaching_strength(&all, j + 1, m, q[j]);
                acc += qh[j].abs() * wj * (b - a);
            }
        }
    }
    Ok(acc)
}

fn line_through(b: &BoundaryPolyline, at: f64) -> (f64, f64) {
    let k = b.segment_at(at);
    let slope = b.slope(k);
    (b.gs[k] - slope * b.xs[k], slope)
}

/// `int_x^{x_horizon} |slope(U) - slope(V)|` along the lower of the two walls, evaluated exactly.
pub fn boundary_slope_term(tu: &Trajectory, tv: &Trajectory, x: f64, x_horizon: f64) -> Result<f64, FunctionalError> {
    if !(x_horizon > x) {
        return Ok(0.0);
    }
    let g = tu.gas;
    let mut pts: Vec<f64> = vec![x, x_horizon];
    for t in [tu, tv] {
        pts.extend(t.slices.iter().map(|s| s.x));
        pts.extend(t.boundary.xs.iter().copied());
    }
    pts.retain(|&s| s >= x && s <= x_horizon);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut acc = 0.0;
    for win in pts.windows(2) {
        let (s0, s1) = (win[0], win[1]);
        if !(s1 > s0) {
            continue;
        }
        let mid = 0.5 * (s0 + s1);
        let su = tu.slice_at(mid)?;
        let sv = tv.slice_at(mid)?;
        let lu = line_through(&tu.boundary, mid);
        let lv = line_through(&tv.boundary, mid);
        let mut sub = vec![s0, s1];
        let mut cross = |c: f64, m: f64| {
            if m != 0.0 {
                let s = -c / m;
                if s > s0 && s < s1 {
                    sub.push(s);
                }
            }
        };
        cross(lu.0 - lv.0, lu.1 - lv.1);
        for f in su.fronts.iter().chain(sv.fronts.iter()) {
            let c = f.y0 - f.speed * f.x0;
            for l in [lu, lv] {
                cross(c - l.0, f.speed - l.1);
            }
        }
        sub.sort_by(f64::total_cmp);
        for w in sub.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let m = 0.5 * (w[0] + w[1]);
            let gu = lu.0 + lu.1 * m;
            let gv = lv.0 + lv.1 * m;
            let y = gu.min(gv);
            let a = su.at(m).profile(gu).at(y).flow_slope(&g);
            let b = sv.at(m).profile(gv).at(y).flow_slope(&g);
            acc += (a - b).abs() * (w[1] - w[0]);
        }
    }
    Ok(acc)
}

/// Full functional at station `x` with the boundary term truncated at `x_horizon`.
pub fn lyapunov_functional(
    tu: &Trajectory,
    tv: &Trajectory,
    x: f64,
    w: &LyapunovWeights,
    x_horizon: f64,
) -> Result<LyapunovValue, FunctionalError> {
    let su = tu.slice_at(x)?;
    let sv = tv.slice_at(x)?;
    let bulk = lyapunov_bulk(&su, &tu.boundary, &sv, &tv.boundary, w, &tu.gas)?;
    let boundary = w.kappa_g * boundary_slope_term(tu, tv, x, x_horizon)?;
    Ok(LyapunovValue { bulk, boundary, total: bulk + boundary })
}
