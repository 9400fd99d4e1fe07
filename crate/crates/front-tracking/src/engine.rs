use euler_core::{eigenvalue, GasParams, State};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riemann::{
    in_trust_region, reflect_at_boundary, solve_boundary_riemann, solve_riemann, RiemannSolution, STATE_TRUST,
};
use wave_curves::{elementary_wave, integral_curve, WaveFamily, WaveSpeed};

use crate::boundary::BoundaryPolyline;
use crate::data::PiecewiseData;
use crate::slice::{Front, SolutionSlice};
use crate::EngineError;

/// Waves weaker than this are not emitted.
pub const DROP_STRENGTH: f64 = 1e-14;
/// Events closer than this in `x` are considered coincident.
pub const COINCIDENCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub h: f64,
    pub nu: u32,
    /// Threshold below which interactions use the simplified solver; `None` selects
    /// `2^-nu` times the initial total strength.
    pub rho_threshold: Option<f64>,
    /// Speed of non-physical fronts; `None` selects the trust-region default.
    pub lambda_hat: Option<f64>,
    pub x_end: f64,
    pub seed: u64,
    pub max_events: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { h: 1.0 / 32.0, nu: 10, rho_threshold: None, lambda_hat: None, x_end: 1.0, seed: 0, max_events: 200_000 }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(EngineError::Config(format!("h = {} must be positive", self.h)));
        }
        if self.nu == 0 || self.nu > 1000 {
            return Err(EngineError::Config(format!("nu = {} must be in 1..=1000", self.nu)));
        }
        if !(self.x_end > 0.0 && self.x_end.is_finite()) {
            return Err(EngineError::Config(format!("x_end = {} must be positive", self.x_end)));
        }
        if let Some(r) = self.rho_threshold {
            if !(r > 0.0) {
                return Err(EngineError::Config(format!("rho_threshold = {r} must be positive")));
            }
        }
        Ok(())
    }

    /// Upper bound `2^-nu` on speed errors.
    pub fn speed_tolerance(&self) -> f64 {
        0.5f64.powi(self.nu as i32)
    }
}

/// `1.2` times the largest `lambda_4` over the corners of the trust box.
pub fn default_lambda_hat(g: &GasParams) -> Result<f64, EngineError> {
    let bar = g.background();
    let mut best = f64::NEG_INFINITY;
    for mask in 0..16u32 {
        let d = |bit: u32| if mask & (1 << bit) != 0 { STATE_TRUST } else { -STATE_TRUST };
        let s = State::new(bar.rho + d(0), bar.u + d(1), bar.v + d(2), bar.p + d(3));
        best = best.max(eigenvalue(&s, g, 4)?);
    }
    Ok(1.2 * best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Fronts `lower` and `lower + 1` meet.
    Interaction { lower: usize },
    /// The topmost front reaches the wall.
    BoundaryHit { front: usize },
    Corner { k: usize },
    End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedKind {
    Accurate,
    Simplified,
    BoundaryHit,
    Corner,
}

impl ResolvedKind {
    pub fn label(self) -> &'static str {
        match self {
            ResolvedKind::Accurate => "interaction_ars",
            ResolvedKind::Simplified => "interaction_srs",
            ResolvedKind::BoundaryHit => "boundary_hit",
            ResolvedKind::Corner => "corner",
        }
    }

    pub fn is_interaction(self) -> bool {
        matches!(self, ResolvedKind::Accurate | ResolvedKind::Simplified)
    }
}

/// What happened at an event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub x: f64,
    pub y: f64,
    pub kind: ResolvedKind,
    /// `|sigma_a sigma_b|` at interactions, `|sigma|` at wall hits and `|omega|` at corners.
    pub magnitude: f64,
    pub families: (WaveFamily, Option<WaveFamily>),
}

/// Stateful driver holding the resolved thresholds and the perturbation generator.
#[derive(Debug, Clone)]
pub struct Engine {
    pub gas: GasParams,
    pub boundary: BoundaryPolyline,
    pub cfg: EngineConfig,
    pub rho_threshold: f64,
    pub lambda_hat: f64,
    rng: ChaCha8Rng,
    next_id: u64,
}

struct Emitted {
    fronts: Vec<Front>,
    /// States from below the first front to above the last one.
    states: Vec<State>,
}

impl Engine {
    pub fn new(boundary: BoundaryPolyline, cfg: EngineConfig, gas: GasParams) -> Result<Self, EngineError> {
        cfg.validate()?;
        gas.validate()?;
        let lambda_hat = match cfg.lambda_hat {
            Some(l) => l,
            None => default_lambda_hat(&gas)?,
        };
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Engine { gas, boundary, rho_threshold: cfg.rho_threshold.unwrap_or(f64::NAN), lambda_hat, cfg, rng, next_id: 0 })
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    /// Seeded perturbation in `(0, 2^-nu-2]`.
    fn perturbation(&mut self) -> f64 {
        let u: f64 = self.rng.gen();
        0.25 * self.cfg.speed_tolerance() * (1.0 - u)
    }

    fn check_trust(&self, x: f64, s: &State) -> Result<(), EngineError> {
        if !in_trust_region(s, &self.gas) {
            return Err(EngineError::Trust { x, state: *s });
        }
        Ok(())
    }

    fn make_front(&mut self, family: WaveFamily, sigma: f64, nominal: f64, x: f64, y: f64, generation: u32) -> Front {
        let speed = match family {
            WaveFamily::Physical(3) => nominal + self.perturbation(),
            _ => nominal,
        };
        Front { family, sigma, x0: x, y0: y, speed, nominal_speed: nominal, generation, id: self.fresh_id() }
    }

    /// Slope of a rarefaction piece: the speed conserving mass across it.
    fn piece_speed(&self, family: usize, below: &State, above: &State) -> f64 {
        let g = &self.gas;
        let dm = above.rho * above.w(g) - below.rho * below.w(g);
        let dq = above.rho * above.v - below.rho * below.v;
        if dm == 0.0 {
            return 0.5 * (eigenvalue(below, g, family).unwrap_or(0.0) + eigenvalue(above, g, family).unwrap_or(0.0));
        }
        dq / dm
    }

    /// Single physical front of strength `sigma` on top of `below`.
    fn single_wave(&mut self, family: usize, sigma: f64, below: &State, x: f64, y: f64, generation: u32) -> Result<(Front, State), EngineError> {
        let (above, sp) = elementary_wave(below, family, sigma, &self.gas)?;
        let nominal = match sp {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { .. } => self.piece_speed(family, below, &above),
        };
        Ok((self.make_front(WaveFamily::Physical(family), sigma, nominal, x, y, generation), above))
    }

    /// Fronts of the elementary wave of family `j` issued at a point, splitting rarefactions
    /// into `ceil(sigma nu)` equal pieces.
    fn wave_fronts(&mut self, j: usize, sigma: f64, below: &State, above: &State, x: f64, y: f64, generation: u32, out: &mut Emitted) -> Result<(), EngineError> {
        if sigma.abs() < DROP_STRENGTH {
            return Ok(());
        }
        if (j == 1 || j == 4) && sigma > 0.0 {
            let pieces = (sigma * self.cfg.nu as f64).ceil().max(1.0) as usize;
            let step = sigma / pieces as f64;
            let mut lo = *below;
            for k in 1..=pieces {
                let hi = if k == pieces { *above } else { integral_curve(below, j, step * k as f64, &self.gas)? };
                let nominal = self.piece_speed(j, &lo, &hi);
                let f = self.make_front(WaveFamily::Physical(j), step, nominal, x, y, generation);
                out.fronts.push(f);
                out.states.push(hi);
                lo = hi;
            }
            return Ok(());
        }
        let nominal = match elementary_wave(below, j, sigma, &self.gas)?.1 {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { .. } => unreachable!("fans handled above"),
        };
        let f = self.make_front(WaveFamily::Physical(j), sigma, nominal, x, y, generation);
        out.fronts.push(f);
        out.states.push(*above);
        Ok(())
    }

    fn emit_fan(&mut self, sol: &RiemannSolution, x: f64, y: f64, gens: [u32; 4]) -> Result<Emitted, EngineError> {
        let mut out = Emitted { fronts: vec![], states: vec![sol.states[0]] };
        for j in 0..4 {
            let below = *out.states.last().unwrap();
            let above = if j == 3 { sol.states[4] } else { sol.states[j + 1] };
            if sol.strengths[j].abs() < DROP_STRENGTH {
                if j == 3 {
                    *out.states.last_mut().unwrap() = sol.states[4];
                }
                continue;
            }
            self.wave_fronts(j + 1, sol.strengths[j], &below, &above, x, y, gens[j], &mut out)?;
        }
        Ok(out)
    }

    /// Solves the Riemann problems at `x = 0` and at the first corner.
    pub fn initialize(&mut self, data: &PiecewiseData) -> Result<SolutionSlice, EngineError> {
        let g = self.gas;
        for s in &data.states {
            self.check_trust(0.0, s)?;
        }
        let mut slice = SolutionSlice { x: 0.0, fronts: vec![], states: vec![data.states[0]], next_corner: 0 };
        for (i, &y) in data.jumps.iter().enumerate() {
            let below = *slice.states.last().unwrap();
            let sol = solve_riemann(&below, &data.states[i + 1], &g)?;
            let em = self.emit_fan(&sol, 0.0, y, [1; 4])?;
            slice.fronts.extend(em.fronts);
            slice.states.pop();
            slice.states.extend(em.states);
        }
        self.corner(&mut slice, 0)?;
        if self.cfg.rho_threshold.is_none() {
            let total: f64 = slice.fronts.iter().map(|f| f.sigma.abs()).sum();
            self.rho_threshold = self.cfg.speed_tolerance() * total.max(f64::MIN_POSITIVE);
        }
        Ok(slice)
    }

    fn corner(&mut self, slice: &mut SolutionSlice, k: usize) -> Result<f64, EngineError> {
        slice.next_corner = k + 1;
        let omega = self.boundary.omegas[k];
        if omega == 0.0 {
            return Ok(0.0);
        }
        let x = self.boundary.xs[k];
        let y = self.boundary.gs[k];
        let top = slice.top_state();
        let (sigma, ug) = solve_boundary_riemann(&top, self.boundary.thetas[k], &self.gas)?;
        self.check_trust(x, &ug)?;
        let mut out = Emitted { fronts: vec![], states: vec![top] };
        self.wave_fronts(1, sigma, &top, &ug, x, y, 1, &mut out)?;
        slice.fronts.extend(out.fronts);
        slice.states.pop();
        slice.states.extend(out.states);
        Ok(omega.abs())
    }

    /// All candidate events after `slice.x`, including the next corner.
    pub fn candidates(&self, slice: &SolutionSlice) -> Vec<Event> {
        let x = slice.x;
        let mut out = vec![];
        for (i, w) in slice.fronts.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.speed > b.speed {
                let xi = (b.y0 - a.y0 + a.speed * a.x0 - b.speed * b.x0) / (a.speed - b.speed);
                out.push(Event { x: xi.max(x), kind: EventKind::Interaction { lower: i } });
            }
        }
        let seg = slice.next_corner.saturating_sub(1);
        let seg_end = self.boundary.xs.get(slice.next_corner).copied().unwrap_or(f64::INFINITY);
        if let Some(top) = slice.fronts.last() {
            let t = self.boundary.slope(seg);
            if top.speed > t {
                let xh = (self.boundary.gs[seg] - t * self.boundary.xs[seg] - top.y0 + top.speed * top.x0) / (top.speed - t);
                if xh <= seg_end {
                    out.push(Event { x: xh.max(x), kind: EventKind::BoundaryHit { front: slice.fronts.len() - 1 } });
                }
            }
        }
        if slice.next_corner < self.boundary.corner_count() {
            out.push(Event { x: seg_end, kind: EventKind::Corner { k: slice.next_corner } });
        }
        out
    }

    /// Earliest event after the slice, or `End` at `x_end`.
    pub fn next_event(&self, slice: &SolutionSlice) -> Event {
        let mut best = Event { x: self.cfg.x_end, kind: EventKind::End };
        for e in self.candidates(slice) {
            if e.x < best.x {
                best = e;
            }
        }
        best
    }

    fn involved(kind: &EventKind) -> Vec<usize> {
        match *kind {
            EventKind::Interaction { lower } => vec![lower, lower + 1],
            EventKind::BoundaryHit { front } => vec![front],
            _ => vec![],
        }
    }

    /// Perturbs speeds until the earliest event is isolated by more than `COINCIDENCE`.
    pub fn legalize(&mut self, slice: &mut SolutionSlice) {
        for _ in 0..32 {
            let mut c = self.candidates(slice);
            c.sort_by(|a, b| a.x.total_cmp(&b.x));
            if c.len() < 2 || c[0].x >= self.cfg.x_end {
                return;
            }
            if c[1].x - c[0].x > COINCIDENCE {
                return;
            }
            let mut ids: Vec<usize> = Self::involved(&c[0].kind).into_iter().chain(Self::involved(&c[1].kind)).collect();
            ids.retain(|&i| slice.fronts[i].family.is_physical());
            let Some(&victim) = ids.iter().max_by_key(|&&i| slice.fronts[i].id) else {
                return;
            };
            let x = slice.x;
            let d = self.perturbation();
            let f = &mut slice.fronts[victim];
            let y = f.y_at(x);
            f.x0 = x;
            f.y0 = y;
            f.speed = f.nominal_speed + if f.family == WaveFamily::Physical(2) { -d } else { d };
        }
    }

    /// Applies `event`, returning its record (none for `End`).
    pub fn resolve_event(&mut self, slice: &mut SolutionSlice, event: Event) -> Result<Option<EventRecord>, EngineError> {
        let x = event.x;
        let rec = match event.kind {
            EventKind::End => {
                slice.x = x;
                return Ok(None);
            }
            EventKind::Corner { k } => {
                slice.x = x;
                let y = self.boundary.gs[k];
                let top_family = WaveFamily::Physical(1);
                let m = self.corner(slice, k)?;
                EventRecord { x, y, kind: ResolvedKind::Corner, magnitude: m, families: (top_family, None) }
            }
            EventKind::BoundaryHit { front } => {
                slice.x = x;
                self.boundary_hit(slice, front)?
            }
            EventKind::Interaction { lower } => {
                slice.x = x;
                self.interaction(slice, lower)?
            }
        };
        for s in &slice.states {
            self.check_trust(x, s)?;
        }
        Ok(Some(rec))
    }

    fn boundary_hit(&mut self, slice: &mut SolutionSlice, i: usize) -> Result<EventRecord, EngineError> {
        let x = slice.x;
        let f = slice.fronts[i];
        let y = self.boundary.g_at(x);
        let below = slice.states[i];
        let theta = self.boundary.thetas[slice.next_corner.saturating_sub(1)];
        let sigma_out = match f.family {
            WaveFamily::Physical(k @ 2..=4) => reflect_at_boundary(&below, k, f.sigma, theta, &self.gas)?,
            _ => solve_boundary_riemann(&below, theta, &self.gas)?.0,
        };
        slice.fronts.truncate(i);
        slice.states.truncate(i + 1);
        let top = elementary_wave(&below, 1, sigma_out, &self.gas)?.0;
        let mut out = Emitted { fronts: vec![], states: vec![below] };
        self.wave_fronts(1, sigma_out, &below, &top, x, y, f.generation, &mut out)?;
        if out.fronts.is_empty() {
            *slice.states.last_mut().unwrap() = top;
        } else {
            slice.fronts.extend(out.fronts);
            slice.states.pop();
            slice.states.extend(out.states);
        }
        Ok(EventRecord { x, y, kind: ResolvedKind::BoundaryHit, magnitude: f.sigma.abs(), families: (f.family, None) })
    }

    fn interaction(&mut self, slice: &mut SolutionSlice, i: usize) -> Result<EventRecord, EngineError> {
        let x = slice.x;
        let a = slice.fronts[i];
        let b = slice.fronts[i + 1];
        let y = 0.5 * (a.y_at(x) + b.y_at(x));
        let ul = slice.states[i];
        let ur = slice.states[i + 2];
        let product = (a.sigma * b.sigma).abs();
        let same = a.family == b.family && a.family.is_physical();
        let accurate = same || (a.family.is_physical() && b.family.is_physical() && product > self.rho_threshold);
        let em = if accurate {
            let sol = solve_riemann(&ul, &ur, &self.gas)?;
            let top = a.generation.max(b.generation) + 1;
            let mut gens = [top; 4];
            if same {
                gens[a.family.index() - 1] = a.generation.min(b.generation);
            } else {
                gens[a.family.index() - 1] = a.generation;
                gens[b.family.index() - 1] = b.generation;
            }
            self.emit_fan(&sol, x, y, gens)?
        } else {
            self.simplified(&a, &b, &ul, &ur, x, y)?
        };
        slice.fronts.splice(i..i + 2, em.fronts);
        slice.states.splice(i..i + 3, em.states);
        Ok(EventRecord {
            x,
            y,
            kind: if accurate { ResolvedKind::Accurate } else { ResolvedKind::Simplified },
            magnitude: product,
            families: (a.family, Some(b.family)),
        })
    }

    /// Transmits the physical fronts with unchanged strengths and lumps the defect into a
    /// non-physical front on top.
    fn simplified(&mut self, a: &Front, b: &Front, ul: &State, ur: &State, x: f64, y: f64) -> Result<Emitted, EngineError> {
        let mut out = Emitted { fronts: vec![], states: vec![*ul] };
        let mut cur = *ul;
        for f in [b, a] {
            if let WaveFamily::Physical(j) = f.family {
                let (front, above) = self.single_wave(j, f.sigma, &cur, x, y, f.generation)?;
                out.fronts.push(front);
                out.states.push(above);
                cur = above;
            }
        }
        let gap = (*ur - cur).norm_l2();
        if gap >= DROP_STRENGTH {
            let generation = a.generation.max(b.generation) + 1;
            let np = Front {
                family: WaveFamily::NonPhysical,
                sigma: gap,
                x0: x,
                y0: y,
                speed: self.lambda_hat,
                nominal_speed: self.lambda_hat,
                generation,
                id: self.fresh_id(),
            };
            out.fronts.push(np);
            out.states.push(*ur);
        } else {
            *out.states.last_mut().unwrap() = *ur;
        }
        Ok(out)
    }
}

/// Slices after every event plus the initial and final stations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub gas: GasParams,
    pub boundary: BoundaryPolyline,
    pub cfg: EngineConfig,
    pub rho_threshold: f64,
    pub lambda_hat: f64,
    pub slices: Vec<SolutionSlice>,
    /// `events[i]` produced `slices[i + 1]`.
    pub events: Vec<EventRecord>,
}

impl Trajectory {
    /// Slice valid at station `x`.
    pub fn slice_at(&self, x: f64) -> Result<SolutionSlice, EngineError> {
        if !(x >= 0.0 && x <= self.cfg.x_end) {
            return Err(EngineError::Range(x));
        }
        let i = self.slices.partition_point(|s| s.x <= x).max(1) - 1;
        Ok(self.slices[i].at(x))
    }

    /// Exact profile in `y` at station `x`, bounded above by the wall.
    pub fn sample(&self, x: f64) -> Result<crate::Profile, EngineError> {
        let s = self.slice_at(x)?;
        Ok(s.profile(self.boundary.g_at(x)))
    }

    pub fn final_slice(&self) -> &SolutionSlice {
        self.slices.last().expect("trajectory is never empty")
    }

    pub fn fronts_ever(&self) -> impl Iterator<Item = (&SolutionSlice, &Front)> {
        self.slices.iter().flat_map(|s| s.fronts.iter().map(move |f| (s, f)))
    }
}

pub fn run(data: &PiecewiseData, boundary: &BoundaryPolyline, cfg: &EngineConfig, g: &GasParams) -> Result<Trajectory, EngineError> {
    let mut engine = Engine::new(boundary.clone(), cfg.clone(), *g)?;
    let mut slice = engine.initialize(data)?;
    let mut slices = vec![slice.clone()];
    let mut events = vec![];
    loop {
        engine.legalize(&mut slice);
        let ev = engine.next_event(&slice);
        if ev.kind == EventKind::End || ev.x >= cfg.x_end {
            slice.x = cfg.x_end;
            slices.push(slice);
            break;
        }
        if events.len() >= cfg.max_events {
            return Err(EngineError::Budget(cfg.max_events));
        }
        if let Some(rec) = engine.resolve_event(&mut slice, ev)? {
            events.push(rec);
            slices.push(slice.clone());
        }
    }
    Ok(Trajectory {
        gas: *g,
        boundary: boundary.clone(),
        cfg: cfg.clone(),
        rho_threshold: engine.rho_threshold,
        lambda_hat: engine.lambda_hat,
        slices,
        events,
    })
}
