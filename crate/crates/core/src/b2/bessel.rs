//! Normalized modified Bessel functions and the quadratic form `Z`.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 2000;

/// `Σ_j wʲ/(4ʲ j! (a)_j)`, i.e. the normalized `I_{a−1}` at `√w`.
pub fn bessel_series(w: f64, a: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        term *= w / (4.0 * (jf + 1.0) * (a + jf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Γ(α+1)(2/u)^α I_α(u) = Σ_j (u/2)^{2j}/(j!(α+1)_j)`, equal to 1 at `u = 0`.
/// Order `−1/2` gives `cosh u`, order `1/2` gives `sinh u / u`.
pub fn normalized_bessel_i(u: f64, order: f64) -> Result<f64> {
    if !(order > -1.0) {
        return Err(Error::Domain(format!("normalized I_α needs α > −1, got {order}")));
    }
    Ok(bessel_series(u * u, order + 1.0))
}

/// `Z(x,y,u,v) = |x|²|y|² + u(x₁²−x₂²)(y₁²−y₂²) + 4v·x₁x₂y₁y₂`.
pub fn z_form(x: [f64; 2], y: [f64; 2], u: f64, v: f64) -> f64 {
    let nx = x[0] * x[0] + x[1] * x[1];
    let ny = y[0] * y[0] + y[1] * y[1];
    nx * ny + u * (x[0] * x[0] - x[1] * x[1]) * (y[0] * y[0] - y[1] * y[1]) + 4.0 * v * x[0] * x[1] * y[0] * y[1]
}

/// `∇ₓZ`.
pub fn z_gradient(x: [f64; 2], y: [f64; 2], u: f64, v: f64) -> [f64; 2] {
    let ny = y[0] * y[0] + y[1] * y[1];
    let p = y[0] * y[0] - y[1] * y[1];
    let q = y[0] * y[1];
    [
        2.0 * x[0] * ny + 2.0 * u * x[0] * p + 4.0 * v * x[1] * q,
        2.0 * x[1] * ny - 2.0 * u * x[1] * p + 4.0 * v * x[0] * q,
    ]
}

/// Hessian of `Z` in `x` (independent of `x`).
pub fn z_hessian(y: [f64; 2], u: f64, v: f64) -> [[f64; 2]; 2] {
    let ny = y[0] * y[0] + y[1] * y[1];
    let p = y[0] * y[0] - y[1] * y[1];
    let q = y[0] * y[1];
    [[2.0 * ny + 2.0 * u * p, 4.0 * v * q], [4.0 * v * q, 2.0 * ny - 2.0 * u * p]]
}
