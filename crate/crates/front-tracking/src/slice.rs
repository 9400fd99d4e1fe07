use euler_core::State;
use wave_curves::WaveFamily;

/// Straight discontinuity `y = y0 + speed (x - x0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Front {
    pub family: WaveFamily,
    /// Signed strength; the Euclidean gap for non-physical fronts.
    pub sigma: f64,
    pub x0: f64,
    pub y0: f64,
    /// Slope actually used for propagation.
    pub speed: f64,
    /// Slope of the exact wave between the adjacent states.
    pub nominal_speed: f64,
    pub generation: u32,
    /// Creation counter; larger means younger.
    pub id: u64,
}

impl Front {
    #[inline]
    pub fn y_at(&self, x: f64) -> f64 {
        self.y0 + self.speed * (x - self.x0)
    }

    pub fn is_rarefaction(&self) -> bool {
        self.family.is_genuinely_nonlinear() && self.sigma > 0.0
    }

    pub fn is_shock(&self) -> bool {
        self.family.is_genuinely_nonlinear() && self.sigma < 0.0
    }
}

/// Piecewise-constant solution at station `x`.
///
/// Fronts are stored bottom to top; `states[i]` lies below `fronts[i]` and the last state
/// is adjacent to the wall. `next_corner` is the first corner not yet processed.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSlice {
    pub x: f64,
    pub fronts: Vec<Front>,
    pub states: Vec<State>,
    pub next_corner: usize,
}

impl SolutionSlice {
    pub fn top_state(&self) -> State {
        *self.states.last().expect("slice has a state")
    }

    pub fn below(&self, i: usize) -> State {
        self.states[i]
    }

    pub fn above(&self, i: usize) -> State {
        self.states[i + 1]
    }

    /// Copy of the slice advanced to `x` without events.
    pub fn at(&self, x: f64) -> SolutionSlice {
        SolutionSlice { x, ..self.clone() }
    }

    pub fn profile(&self, top: f64) -> Profile {
        Profile {
            breaks: self.fronts.iter().map(|f| f.y_at(self.x)).collect(),
            states: self.states.clone(),
            top,
        }
    }
}

/// Exact piecewise-constant function of `y` on `(-infinity, top)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub breaks: Vec<f64>,
    pub states: Vec<State>,
    pub top: f64,
}

impl Profile {
    pub fn constant(u: State, top: f64) -> Self {
        Profile { breaks: vec![], states: vec![u], top }
    }

    /// State at `y`; `y` above `top` returns the wall state.
    pub fn at(&self, y: f64) -> State {
        let i = self.breaks.partition_point(|&b| b < y);
        self.states[i]
    }

    /// Integral of `f(state)` over `[lo, hi]` intersected with the domain.
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(&State) -> f64) -> f64 {
        let hi = hi.min(self.top);
        if !(hi > lo) {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut a = lo;
        for (i, s) in self.states.iter().enumerate() {
            let b = if i < self.breaks.len() { self.breaks[i].min(hi) } else { hi };
            if b > a {
                acc += f(s) * (b - a);
                a = b;
            }
            if a >= hi {
                break;
            }
        }
        acc
    }

    pub fn bottom(&self) -> State {
        self.states[0]
    }
}
