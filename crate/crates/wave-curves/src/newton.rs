//! Damped Newton iteration with central finite-difference Jacobians.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 50, fd_step: 1e-7, max_halvings: 6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonFailure {
    pub iterations: usize,
    pub residual: f64,
    pub reason: &'static str,
}

fn inf_norm<const N: usize>(a: &[f64; N]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian<const N: usize, E>(
    f: &impl Fn(&[f64; N]) -> Result<[f64; N], E>,
    x: &[f64; N],
    step: f64,
) -> Result<DMatrix<f64>, E> {
    let mut jac = DMatrix::<f64>::zeros(N, N);
    for j in 0..N {
        let mut up = *x;
        let mut dn = *x;
        up[j] += step;
        dn[j] -= step;
        let fu = f(&up)?;
        let fd = f(&dn)?;
        for i in 0..N {
            jac[(i, j)] = (fu[i] - fd[i]) / (2.0 * step);
        }
    }
    Ok(jac)
}

/// Solves `f(x) = 0` from `x0`. A step that fails to reduce the residual is halved
/// up to `max_halvings` times; evaluation errors count as a failed trial.
pub fn solve<const N: usize, E>(
    f: impl Fn(&[f64; N]) -> Result<[f64; N], E>,
    x0: [f64; N],
    opts: &NewtonOptions,
) -> Result<[f64; N], NewtonFailure> {
    let mut x = x0;
    let mut fx = f(&x).map_err(|_| NewtonFailure { iterations: 0, residual: f64::NAN, reason: "initial guess outside domain" })?;
    let mut res = inf_norm(&fx);
    for it in 0..opts.max_iter {
        if res <= opts.tol {
            return Ok(x);
        }
        let jac = fd_jacobian(&f, &x, opts.fd_step).map_err(|_| NewtonFailure {
            iterations: it,
            residual: res,
            reason: "jacobian evaluation left the domain",
        })?;
        let rhs = DVector::<f64>::from_column_slice(&fx);
        let dx = jac.lu().solve(&rhs).ok_or(NewtonFailure { iterations: it, residual: res, reason: "singular jacobian" })?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let mut trial = x;
            for i in 0..N {
                trial[i] -= lambda * dx[i];
            }
            if let Ok(ft) = f(&trial) {
                let rt = inf_norm(&ft);
                if rt.is_finite() {
                    let better = rt < res;
                    accepted = Some((trial, ft, rt));
                    if better {
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        let Some((xn, fnew, rn)) = accepted else {
            return Err(NewtonFailure { iterations: it, residual: res, reason: "no admissible damped step" });
        };
        let step = dx.amax() * lambda;
        x = xn;
        fx = fnew;
        res = rn;
        let scale = 1.0 + inf_norm(&x);
        if step <= 4.0 * f64::EPSILON * scale {
            // rounding floor reached
            if res <= opts.tol.max(1e-10) {
                return Ok(x);
            }
            return Err(NewtonFailure { iterations: it + 1, residual: res, reason: "stagnated" });
        }
    }
    if res <= opts.tol {
        Ok(x)
    } else {
        Err(NewtonFailure { iterations: opts.max_iter, residual: res, reason: "iteration limit" })
    }
}

/// Scalar secant-free Newton on one unknown with a central-difference derivative.
pub fn solve_scalar<E>(
    f: impl Fn(f64) -> Result<f64, E>,
    x0: f64,
    opts: &NewtonOptions,
) -> Result<f64, NewtonFailure> {
    solve(|x: &[f64; 1]| f(x[0]).map(|v| [v]), [x0], opts).map(|x| x[0])
}
