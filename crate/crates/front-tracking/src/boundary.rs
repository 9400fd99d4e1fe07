use crate::EngineError;

/// Turning angles below this magnitude are treated as exactly zero.
pub const ANGLE_SNAP: f64 = 1e-13;

/// Piecewise straight approximation `y = g_h(x)` of the upper wall.
///
/// Corner `k` sits at `(xs[k], gs[k])`; segment `k` leaves it with inclination
/// `thetas[k]`, and the last segment continues to infinity. `omegas[k]` is the
/// turning angle at corner `k`, measured from the horizontal inflow at `k = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolyline {
    pub h: f64,
    pub xs: Vec<f64>,
    pub gs: Vec<f64>,
    pub thetas: Vec<f64>,
    pub omegas: Vec<f64>,
}

impl BoundaryPolyline {
    /// Builds the polyline from segment inclinations, starting at the origin.
    pub fn from_thetas(h: f64, thetas: &[f64]) -> Result<Self, EngineError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(EngineError::Config(format!("boundary mesh h = {h} must be positive")));
        }
        if thetas.is_empty() {
            return Err(EngineError::Config("boundary needs at least one segment".into()));
        }
        let n = thetas.len();
        let mut xs = Vec::with_capacity(n);
        let mut gs = Vec::with_capacity(n);
        let mut th: Vec<f64> = Vec::with_capacity(n);
        let mut om = Vec::with_capacity(n);
        let mut g = 0.0;
        let mut prev = 0.0;
        for (k, &t) in thetas.iter().enumerate() {
            if !t.is_finite() || t.abs() >= std::f64::consts::FRAC_PI_4 {
                return Err(EngineError::Config(format!("segment angle {t} is not admissible")));
            }
            let (t, w) = if (t - prev).abs() < ANGLE_SNAP { (prev, 0.0) } else { (t, t - prev) };
            if k > 0 {
                g += h * th[k - 1].tan();
            }
            xs.push(k as f64 * h);
            gs.push(g);
            th.push(t);
            om.push(w);
            prev = t;
        }
        Ok(BoundaryPolyline { h, xs, gs, thetas: th, omegas: om })
    }

    /// Interpolates `g` at the mesh points `k h` up to `x_max`, continuing with `tail_slope`.
    pub fn approximate(g: impl Fn(f64) -> f64, h: f64, x_max: f64, tail_slope: f64) -> Result<Self, EngineError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(EngineError::Config(format!("boundary mesh h = {h} must be positive")));
        }
        if g(0.0) != 0.0 {
            return Err(EngineError::Config("boundary must pass through the origin".into()));
        }
        let n = (x_max / h).ceil().max(1.0) as usize;
        let mut thetas = Vec::with_capacity(n + 1);
        for k in 0..n {
            let a = g(k as f64 * h);
            let b = g((k + 1) as f64 * h);
            let slope = (b - a) / h;
            if !slope.is_finite() {
                return Err(EngineError::Config(format!("boundary is not Lipschitz near x = {}", k as f64 * h)));
            }
            thetas.push(slope.atan());
        }
        thetas.push(tail_slope.atan());
        Self::from_thetas(h, &thetas)
    }

    /// Straight wedge `y = -x tan(angle)`.
    pub fn wedge(angle: f64, h: f64, x_max: f64) -> Result<Self, EngineError> {
        let n = (x_max / h).ceil().max(1.0) as usize;
        Self::from_thetas(h, &vec![-angle; n + 1])
    }

    pub fn corner_count(&self) -> usize {
        self.xs.len()
    }

    /// Index of the segment containing `x` (right-continuous at corners).
    pub fn segment_at(&self, x: f64) -> usize {
        match self.xs.iter().rposition(|&xk| xk <= x) {
            Some(k) => k,
            None => 0,
        }
    }

    pub fn theta_at(&self, x: f64) -> f64 {
        self.thetas[self.segment_at(x)]
    }

    pub fn g_at(&self, x: f64) -> f64 {
        let k = self.segment_at(x);
        self.gs[k] + self.thetas[k].tan() * (x - self.xs[k])
    }

    /// Slope `g_h'` on segment `k`.
    pub fn slope(&self, k: usize) -> f64 {
        self.thetas[k].tan()
    }

    /// Sum of `|omega_k|` over corners with index at least `from`.
    pub fn remaining_turning(&self, from: usize) -> f64 {
        self.omegas.iter().skip(from).map(|w| w.abs()).sum()
    }

    /// Total variation of `g_h'` on `[0, infinity)`, excluding the jump at the origin.
    pub fn slope_variation(&self) -> f64 {
        (1..self.thetas.len()).map(|k| (self.slope(k) - self.slope(k - 1)).abs()).sum()
    }

    /// `L1` distance between the slopes of two polylines over `[x0, x1]`.
    pub fn slope_l1_distance(&self, other: &BoundaryPolyline, x0: f64, x1: f64) -> f64 {
        let mut pts: Vec<f64> = self.xs.iter().chain(other.xs.iter()).copied().filter(|&x| x > x0 && x < x1).collect();
        pts.push(x0);
        pts.push(x1);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                (self.slope(self.segment_at(m)) - other.slope(other.segment_at(m))).abs() * (w[1] - w[0])
            })
            .sum()
    }
}
