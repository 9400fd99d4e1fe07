//! Adaptive Dormand-Prince 5(4) integration of autonomous systems in R^4.

type V4 = [f64; 4];

#[inline]
fn axpy(y: &V4, terms: &[(f64, &V4)], h: f64) -> V4 {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum OdeError<E> {
    Rhs(E),
    StepUnderflow { t: f64 },
    TooManySteps,
}

/// Integrates `dy/dt = rhs(y)` from `t = 0` to `t = t_end` (either sign).
pub fn dopri45<E>(
    rhs: impl Fn(&V4) -> Result<V4, E>,
    y0: V4,
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> Result<V4, OdeError<E>> {
    if t_end == 0.0 {
        return Ok(y0);
    }
    let dir = t_end.signum();
    let span = t_end.abs();
    let mut h = (span / 4.0).min(0.02);
    let mut t = 0.0;
    let mut y = y0;
    let f = |y: &V4| rhs(y).map_err(OdeError::Rhs);
    let mut k1 = f(&y)?;
    for _ in 0..100_000 {
        if t >= span {
            return Ok(y);
        }
        if t + h > span {
            h = span - t;
        }
        let hs = dir * h;
        let k2 = f(&axpy(&y, &[(1.0 / 5.0, &k1)], hs))?;
        let k3 = f(&axpy(&y, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)], hs))?;
        let k4 = f(&axpy(&y, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)], hs))?;
        let k5 = f(&axpy(
            &y,
            &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)],
            hs,
        ))?;
        let k6 = f(&axpy(
            &y,
            &[
                (9017.0 / 3168.0, &k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ],
            hs,
        ))?;
        let y5 = axpy(
            &y,
            &[
                (35.0 / 384.0, &k1),
                (500.0 / 1113.0, &k3),
                (125.0 / 192.0, &k4),
                (-2187.0 / 6784.0, &k5),
                (11.0 / 84.0, &k6),
            ],
            hs,
        );
        let k7 = f(&y5)?;
        let e = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut err = 0.0f64;
        for i in 0..4 {
            let mut ei = 0.0;
            for (c, k) in e.iter().zip(ks.iter()) {
                ei += c * k[i];
            }
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((hs * ei).abs() / sc);
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < 1e-14 * span.max(1e-300) && t < span {
            return Err(OdeError::StepUnderflow { t });
        }
    }
    Err(OdeError::TooManySteps)
}
