use euler_core::State;

use crate::EngineError;

/// Piecewise-constant inflow data on `y < 0`: `states[i]` lives between
/// `jumps[i - 1]` and `jumps[i]`, with `states[0]` extending to `-infinity`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseData {
    pub jumps: Vec<f64>,
    pub states: Vec<State>,
}

impl PiecewiseData {
    pub fn constant(u: State) -> Self {
        PiecewiseData { jumps: vec![], states: vec![u] }
    }

    pub fn new(jumps: Vec<f64>, states: Vec<State>) -> Result<Self, EngineError> {
        if states.len() != jumps.len() + 1 {
            return Err(EngineError::Config(format!(
                "{} jumps need {} states, got {}",
                jumps.len(),
                jumps.len() + 1,
                states.len()
            )));
        }
        if jumps.windows(2).any(|w| !(w[0] < w[1])) || jumps.iter().any(|&y| !(y < 0.0)) {
            return Err(EngineError::Config("jump locations must be negative and strictly increasing".into()));
        }
        Ok(PiecewiseData { jumps, states })
    }

    /// State at `y` (left-continuous at jumps).
    pub fn at(&self, y: f64) -> State {
        let i = self.jumps.partition_point(|&j| j < y);
        self.states[i]
    }

    pub fn top(&self) -> State {
        *self.states.last().expect("at least one state")
    }

    /// `L1` distance of the data to a function on `[y0, 0]` by composite Gauss quadrature.
    pub fn l1_error(&self, u0: &impl Fn(f64) -> State, y0: f64, cells: usize) -> f64 {
        let gl = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];
        let dy = -y0 / cells as f64;
        let mut acc = 0.0;
        for c in 0..cells {
            let m = y0 + (c as f64 + 0.5) * dy;
            for (t, w) in gl {
                let y = m + 0.5 * dy * t;
                acc += 0.5 * dy * w * (u0(y) - self.at(y)).norm_l1();
            }
        }
        acc
    }
}

/// Cell averages of `u0` on a dyadic grid over `[y0, 0]`, refined until the `L1` error is
/// below `2^-nu`; below `y0` the data equals `u0(y0)`. Neighbouring equal cells are merged.
pub fn approximate_initial_data(u0: impl Fn(f64) -> State, y0: f64, nu: u32) -> Result<PiecewiseData, EngineError> {
    if !(y0 < 0.0) {
        return Err(EngineError::Config("support must lie in y < 0".into()));
    }
    let target = 0.5f64.powi(nu as i32);
    let mut cells = 8usize;
    loop {
        let dy = -y0 / cells as f64;
        let mut jumps = vec![];
        let mut states = vec![u0(y0)];
        for c in 0..cells {
            let a = y0 + c as f64 * dy;
            let k = 8;
            let samples: Vec<State> = (0..k).map(|q| u0(a + (q as f64 + 0.5) * dy / k as f64)).collect();
            let avg = if samples.iter().all(|s| *s == samples[0]) {
                samples[0]
            } else {
                samples.iter().fold(State::default(), |acc, s| acc + (1.0 / k as f64) * *s)
            };
            if avg != *states.last().unwrap() {
                jumps.push(a);
                states.push(avg);
            }
        }
        let data = PiecewiseData::new(jumps, states)?;
        let fine = (cells * 16).max(1024);
        if data.l1_error(&u0, y0, fine) < target {
            return Ok(data);
        }
        if cells > 1 << 20 {
            return Err(EngineError::Config("initial data does not appear to have bounded variation".into()));
        }
        cells *= 2;
    }
}
