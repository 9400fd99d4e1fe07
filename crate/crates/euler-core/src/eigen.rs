use crate::state::{DomainError, GasParams, State};
use crate::{check_family, Family};

fn denominators(s: &State, g: &GasParams) -> Result<(f64, f64, f64), DomainError> {
    s.check(g)?;
    let t2 = g.tau2();
    let w = s.w(g);
    let c2 = g.gamma * s.p / s.rho;
    let den = w * w - t2 * c2;
    if den <= 0.0 {
        return Err(DomainError::Subsonic(den));
    }
    Ok((w, c2, den))
}

/// Eigenvalues (lambda_1, lambda_2, lambda_3, lambda_4); families 2 and 3 coincide.
pub fn eigenvalues(s: &State, g: &GasParams) -> Result<[f64; 4], DomainError> {
    let (w, c2, den) = denominators(s, g)?;
    let t2 = g.tau2();
    let root = c2.sqrt() * (w * w + t2 * (s.v * s.v - c2)).sqrt();
    let l23 = s.v / w;
    Ok([(w * s.v - root) / den, l23, l23, (w * s.v + root) / den])
}

pub fn eigenvalue(s: &State, g: &GasParams, family: Family) -> Result<f64, DomainError> {
    check_family(family)?;
    Ok(eigenvalues(s, g)?[family - 1])
}

/// Residual of the quadratic characteristic polynomial of families 1 and 4.
pub fn characteristic_residual(s: &State, g: &GasParams, lambda: f64) -> f64 {
    let t2 = g.tau2();
    let w = s.w(g);
    let c2 = g.gamma * s.p / s.rho;
    (w * w - t2 * c2) * lambda * lambda - 2.0 * w * s.v * lambda + s.v * s.v - c2
}

/// Unnormalized right eigenvector.
pub fn raw_eigenvector(s: &State, g: &GasParams, family: Family) -> Result<[f64; 4], DomainError> {
    check_family(family)?;
    let lam = eigenvalues(s, g)?;
    let t2 = g.tau2();
    let w = s.w(g);
    Ok(match family {
        2 => [0.0, w, t2 * s.v, 0.0],
        3 => [1.0, 0.0, 0.0, 0.0],
        j => {
            let l = lam[j - 1];
            let d = w * l - s.v;
            [(1.0 + t2 * l * l) * s.rho / d, -l, 1.0, d * s.rho]
        }
    })
}

/// Closed-form gradient of lambda_j with respect to (rho, u, v, p).
pub fn eigenvalue_gradient(s: &State, g: &GasParams, family: Family) -> Result<[f64; 4], DomainError> {
    check_family(family)?;
    let (w, c2, den) = denominators(s, g)?;
    let t2 = g.tau2();
    if family == 2 || family == 3 {
        return Ok([0.0, -t2 * s.v / (w * w), 1.0 / w, 0.0]);
    }
    let l = eigenvalues(s, g)?[family - 1];
    let d = den * l - w * s.v;
    let m = w * l - s.v;
    let k = 1.0 + t2 * l * l;
    Ok([
        -k * c2 / (2.0 * d * s.rho),
        -t2 * m * l / d,
        m / d,
        g.gamma * k / (2.0 * d * s.rho),
    ])
}

/// Central-difference gradient of lambda_j, step 1e-6 (1 + |U|).
pub fn eigenvalue_gradient_fd(s: &State, g: &GasParams, family: Family) -> Result<[f64; 4], DomainError> {
    let base = s.to_array();
    let h = 1e-6 * (1.0 + s.norm_l2());
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let mut up = base;
        let mut dn = base;
        up[i] += h;
        dn[i] -= h;
        let lu = eigenvalue(&State::from_array(up), g, family)?;
        let ld = eigenvalue(&State::from_array(dn), g, family)?;
        *o = (lu - ld) / (2.0 * h);
    }
    Ok(out)
}

/// grad(lambda_j) . r~_j; nonzero for families 1, 4 and zero for 2, 3.
pub fn genuine_nonlinearity(s: &State, g: &GasParams, family: Family) -> Result<f64, DomainError> {
    let grad = eigenvalue_gradient(s, g, family)?;
    let r = raw_eigenvector(s, g, family)?;
    Ok(grad.iter().zip(r.iter()).map(|(a, b)| a * b).sum())
}

/// Normalization factor e_j; families 2 and 3 are left unnormalized.
pub fn eigenvector_normalization(s: &State, g: &GasParams, family: Family) -> Result<f64, DomainError> {
    check_family(family)?;
    if family == 2 || family == 3 {
        return Ok(1.0);
    }
    Ok(1.0 / genuine_nonlinearity(s, g, family)?)
}

/// Normalized right eigenvector r_j = e_j r~_j.
pub fn eigenvector(s: &State, g: &GasParams, family: Family) -> Result<[f64; 4], DomainError> {
    let e = eigenvector_normalization(s, g, family)?;
    let r = raw_eigenvector(s, g, family)?;
    Ok([e * r[0], e * r[1], e * r[2], e * r[3]])
}
