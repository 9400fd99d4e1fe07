use euler_core::GasParams;
use front_tracking::{BoundaryPolyline, EventRecord, Front, SolutionSlice, Trajectory, WaveFamily};
use riemann::{boundary_coefficient, reflect_at_boundary};
use wave_curves::{compose_wave_curves, wave_curve};

use crate::FunctionalError;

/// Weights of the Glimm-type functional `V + K Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlimmWeights {
    /// Interaction weight.
    pub k: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    /// Corner weight.
    pub kc: f64,
}

/// Coefficients at the background state that bound admissible weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlimmBounds {
    pub kb: f64,
    /// Reflection coefficients of families 2, 3 and 4.
    pub kr: [f64; 3],
    pub c21: f64,
}

impl GlimmBounds {
    pub fn at_background(g: &GasParams) -> Result<Self, FunctionalError> {
        let ub = g.background();
        let kb = boundary_coefficient(g)?;
        let s = 1e-7;
        let mut kr = [0.0; 3];
        for (i, k) in (2..=4).enumerate() {
            let below = wave_curve(&ub, k, -s, g).map_err(riemann::RiemannError::from)?;
            kr[i] = reflect_at_boundary(&below, k, s, 0.0, g)? / s;
        }
        Ok(GlimmBounds { kb, kr, c21: sample_c21(g)? })
    }
}

/// Two-sided equivalence constant between `|U_a - U_b|` and the summed strengths,
/// sampled on single waves and sign patterns around the background.
fn sample_c21(g: &GasParams) -> Result<f64, FunctionalError> {
    let ub = g.background();
    let mut dirs: Vec<[f64; 4]> = vec![];
    for j in 0..4 {
        for s in [1e-3, -1e-3, 1e-2, -1e-2] {
            let mut d = [0.0; 4];
            d[j] = s;
            dirs.push(d);
        }
    }
    for m in 0..16u32 {
        let d: [f64; 4] = std::array::from_fn(|j| if m >> j & 1 == 1 { 5e-3 } else { -5e-3 });
        dirs.push(d);
    }
    let mut c: f64 = 1.0;
    for d in dirs {
        let ua = compose_wave_curves(&ub, &d, g).map_err(riemann::RiemannError::from)?;
        let du = (ua - ub).norm_l2();
        let ss: f64 = d.iter().map(|x| x.abs()).sum();
        c = c.max(du / ss).max(ss / du);
    }
    Ok(c)
}

impl GlimmWeights {
    /// 1.5 times the lower bounds derived from the background coefficients.
    pub fn background(g: &GasParams) -> Result<Self, FunctionalError> {
        let b = GlimmBounds::at_background(g)?;
        let kc = 1.5 * (b.kb.abs() + 0.5).max(1.0);
        let ki = b.kr.map(|r| 1.5 * (r.abs() + 0.25).max(1.0));
        let kmax = ki.iter().copied().fold(0.0, f64::max);
        let k = 1.5 * (4.0 * b.c21 * kmax + 1.0);
        Ok(GlimmWeights { k, k2: ki[0], k3: ki[1], k4: ki[2], kc })
    }

    pub fn check(&self, b: &GlimmBounds) -> Result<(), FunctionalError> {
        let ki = [self.k2, self.k3, self.k4];
        if !(self.kc > (b.kb.abs() + 0.5).max(1.0)) {
            return Err(FunctionalError::Weights(format!("corner weight {} too small", self.kc)));
        }
        for (w, r) in ki.iter().zip(b.kr) {
            if !(*w > (r.abs() + 0.25).max(1.0)) {
                return Err(FunctionalError::Weights(format!("family weight {w} too small")));
            }
        }
        let kmax = ki.iter().copied().fold(0.0, f64::max);
        if !(self.k > 4.0 * b.c21 * kmax + 1.0) {
            return Err(FunctionalError::Weights(format!("interaction weight {} too small", self.k)));
        }
        Ok(())
    }
}

/// Whether the lower front and the upper front approach each other.
pub fn approaching(lower: &Front, upper: &Front) -> bool {
    match (lower.family, upper.family) {
        (WaveFamily::NonPhysical, WaveFamily::Physical(_)) => true,
        (WaveFamily::Physical(i), WaveFamily::Physical(j)) => i > j || (i == j && lower.sigma.min(upper.sigma) < 0.0),
        _ => false,
    }
}

/// Sum of `|sigma_a| |sigma_b|` over approaching pairs.
pub fn interaction_potential(slice: &SolutionSlice) -> f64 {
    // running sums of |sigma| below the current front, per family index 1..=5
    let mut all = [0.0; 6];
    let mut neg = [0.0; 6];
    let mut q = 0.0;
    for f in &slice.fronts {
        let s = f.sigma.abs();
        if let WaveFamily::Physical(j) = f.family {
            let mut acc: f64 = all[j + 1..].iter().sum();
            acc += if f.sigma < 0.0 { all[j] } else { neg[j] };
            q += s * acc;
        }
        let i = f.family.index();
        all[i] += s;
        if f.sigma < 0.0 {
            neg[i] += s;
        }
    }
    q
}

/// Components of the Glimm functional on one slice.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GlimmParts {
    /// Total strength per physical family.
    pub v: [f64; 4],
    pub v_np: f64,
    /// Turning angles of the corners not yet reached.
    pub v_c: f64,
    pub q: f64,
}

impl GlimmParts {
    pub fn of(slice: &SolutionSlice, boundary: &BoundaryPolyline) -> Self {
        let mut p = GlimmParts { q: interaction_potential(slice), ..Default::default() };
        for f in &slice.fronts {
            match f.family {
                WaveFamily::Physical(j) => p.v[j - 1] += f.sigma.abs(),
                WaveFamily::NonPhysical => p.v_np += f.sigma.abs(),
            }
        }
        p.v_c = boundary.remaining_turning(slice.next_corner);
        p
    }

    pub fn weighted_strength(&self, w: &GlimmWeights) -> f64 {
        self.v[0] + w.k2 * self.v[1] + w.k3 * self.v[2] + w.k4 * self.v[3] + self.v_np + w.kc * self.v_c
    }

    pub fn total(&self, w: &GlimmWeights) -> f64 {
        self.weighted_strength(w) + w.k * self.q
    }
}

pub fn glimm_functional(slice: &SolutionSlice, boundary: &BoundaryPolyline, w: &GlimmWeights) -> f64 {
    GlimmParts::of(slice, boundary).total(w)
}

/// Functional values on both sides of one event.
#[derive(Debug, Clone, PartialEq)]
pub struct GlimmStep {
    pub record: EventRecord,
    pub before: f64,
    pub after: f64,
}

impl GlimmStep {
    pub fn change(&self) -> f64 {
        self.after - self.before
    }
}

pub fn glimm_steps(traj: &Trajectory, w: &GlimmWeights) -> Vec<GlimmStep> {
    let values: Vec<f64> = traj.slices.iter().map(|s| glimm_functional(s, &traj.boundary, w)).collect();
    traj.events
        .iter()
        .enumerate()
        .map(|(i, r)| GlimmStep { record: *r, before: values[i], after: values[i + 1] })
        .collect()
}
