use std::io::{self, Write};

use crate::engine::Trajectory;

/// Decimal float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the trajectory as plain text, states and fronts listed from the wall downwards.
pub fn write_trajectory(traj: &Trajectory, mut w: impl Write) -> io::Result<()> {
    let f = format_float;
    writeln!(w, "x_end,h,nu,tau,gamma,a_inf,seed")?;
    writeln!(
        w,
        "{},{},{},{},{},{},{}",
        f(traj.cfg.x_end),
        f(traj.cfg.h),
        traj.cfg.nu,
        f(traj.gas.tau),
        f(traj.gas.gamma),
        f(traj.gas.a_inf),
        traj.cfg.seed
    )?;
    for s in &traj.slices {
        writeln!(w, "SLICE x={}", f(s.x))?;
        let n = s.fronts.len();
        for i in (0..=n).rev() {
            let u = s.states[i];
            writeln!(w, "state,{},{},{},{}", f(u.rho), f(u.u), f(u.v), f(u.p))?;
            if i > 0 {
                let fr = &s.fronts[i - 1];
                writeln!(
                    w,
                    "front,{},{},{},{},{}",
                    fr.family,
                    f(fr.sigma),
                    f(fr.y_at(s.x)),
                    f(fr.speed),
                    fr.generation
                )?;
            }
        }
    }
    Ok(())
}
