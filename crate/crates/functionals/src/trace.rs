use std::io::{self, Write};

use front_tracking::{format_float, Trajectory};

use crate::glimm::{glimm_functional, GlimmWeights};

/// Functional values at strictly increasing stations with the event that produced them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FunctionalTrace {
    pub stations: Vec<f64>,
    pub values: Vec<f64>,
    pub events: Vec<String>,
}

impl FunctionalTrace {
    /// Appends a value; a repeated station keeps the later value and joins the labels.
    pub fn push(&mut self, x: f64, value: f64, event: &str) {
        if let Some(&last) = self.stations.last() {
            if x <= last {
                let i = self.values.len() - 1;
                self.values[i] = value;
                self.events[i].push('+');
                self.events[i].push_str(event);
                return;
            }
        }
        self.stations.push(x);
        self.values.push(value);
        self.events.push(event.to_string());
    }

    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "x,value,event_kind")?;
        for ((x, v), e) in self.stations.iter().zip(&self.values).zip(&self.events) {
            writeln!(w, "{},{},{}", format_float(*x), format_float(*v), e)?;
        }
        Ok(())
    }
}

/// Glimm functional after the initial station and after every event.
pub fn glimm_trace(traj: &Trajectory, w: &GlimmWeights) -> FunctionalTrace {
    let mut t = FunctionalTrace::default();
    let n = traj.slices.len();
    for (i, s) in traj.slices.iter().enumerate() {
        let label = if i == 0 {
            "initial"
        } else if i <= traj.events.len() {
            traj.events[i - 1].kind.label()
        } else {
            "end"
        };
        if i + 1 == n && i > traj.events.len() && t.stations.last() == Some(&s.x) {
            continue;
        }
        t.push(s.x, glimm_functional(s, &traj.boundary, w), label);
    }
    t
}
