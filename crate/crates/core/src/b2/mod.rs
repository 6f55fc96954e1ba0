//! Integral representation of the I₂(4) kernels.
//!
//! With `ν = k₁ + k₂`, `a = ν + 1/2` and `F_a(w) = Σ_j wʲ/(4ʲ j! (a)_j)`
//! (the normalized `I_{ν−1/2}` at `√w`),
//!
//! ```text
//! E_k^G(x,y) = ∬ F_a(Z/2) dμ^{k₂}(u) dμ^{k₁}(v),
//! U(x,y)/4   = ∬ F_a(Z/2)(1 + λuv) dμ^{k₂}(u) dμ^{k₁}(v),
//! ```
//!
//! where `λ = (2ν+1)(2ν+3)(2k₁+1)(2k₂+1)/η_k`. `E_k` itself follows from
//! `2y|y|²E_k = (y + 2T̄)T_y U`, with every `x`-derivative taken analytically
//! under the integral. `f64` only.

pub mod bessel;
pub mod quadrature;

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::DihedralSystem;
use crate::kernel::alternating_poly;
use crate::operator::DunklOperators;
use crate::ComplexMultiplicity;

pub use bessel::{bessel_series, normalized_bessel_i, z_form, z_gradient, z_hessian};
pub use quadrature::{QuadratureRule, DEFAULT_NODES};

/// Relative distance to a mirror below which `E_k` by integral is refused.
const MIRROR_TOL: f64 = 1e-10;

/// Quadrature evaluation of the I₂(4) kernels for real `k₁, k₂ > 0`.
#[derive(Clone, Debug)]
pub struct B2Integral {
    k1: f64,
    k2: f64,
    /// `u` multiplies `(x₁²−x₂²)(y₁²−y₂²)`, which the diagonal reflections
    /// flip, so it carries the odd-orbit value `k₂`; `v` carries `k₁`.
    mu_u: QuadratureRule,
    mu_v: QuadratureRule,
    eta: f64,
    lambda: f64,
    roots: Vec<([f64; 2], f64)>,
}

fn real_positive(k: Complex64, name: &str) -> Result<f64> {
    if k.im != 0.0 || !(k.re > 0.0) {
        return Err(Error::Domain(format!("the integral representation needs {name} > 0 real, got {k}")));
    }
    Ok(k.re)
}

impl B2Integral {
    pub fn new(ops: &DunklOperators<f64>, nodes: usize) -> Result<Self> {
        if ops.system().s() != 4 {
            return Err(Error::Validation(format!("the integral representation is for s = 4, got s = {}", ops.system().s())));
        }
        let k = ops.multiplicity();
        let k1 = real_positive(*k.k1(), "k1")?;
        let k2 = real_positive(*k.k2(), "k2")?;
        let eta = ops.eta()?.re;
        if eta.abs() <= 1e-12 {
            return Err(Error::DegenerateMultiplicity(format!("η_k = {eta} vanishes")));
        }
        let nu = k1 + k2;
        let lambda = (2.0 * nu + 1.0) * (2.0 * nu + 3.0) * (2.0 * k1 + 1.0) * (2.0 * k2 + 1.0) / eta;
        let roots = ops.roots().iter().zip(ops.root_weights()).map(|(r, w)| (r.vector, w.re)).collect();
        Ok(Self {
            k1,
            k2,
            mu_u: QuadratureRule::new(k2, nodes)?,
            mu_v: QuadratureRule::new(k1, nodes)?,
            eta,
            lambda,
            roots,
        })
    }

    pub fn from_multiplicity(k1: f64, k2: f64, nodes: usize) -> Result<Self> {
        let sys = DihedralSystem::new(4)?;
        let k = ComplexMultiplicity::real(&sys, k1, k2)?;
        Self::new(&DunklOperators::new(sys, k), nodes)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn nu(&self) -> f64 {
        self.k1 + self.k2
    }

    /// Parameter of the series `F_a`, `a = ν + 1/2`.
    pub fn a(&self) -> f64 {
        self.nu() + 0.5
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nodes(&self) -> usize {
        self.mu_u.len()
    }

    /// `∬ f(u, v) dμ^{k₂}(u) dμ^{k₁}(v)`, `u` outer.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut total = 0.0;
        for (u, wu) in self.mu_u.iter() {
            let mut inner = 0.0;
            for (v, wv) in self.mu_v.iter() {
                inner += wv * f(u, v);
            }
            total += wu * inner;
        }
        total
    }

    /// `E_k^G(x, y)`.
    pub fn bessel(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let a = self.a();
        self.integrate(|u, v| bessel_series(z_form(x, y, u, v) / 2.0, a))
    }

    /// `∬ F_a(Z/2)·uv`.
    pub fn uv_moment(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let a = self.a();
        self.integrate(|u, v| bessel_series(z_form(x, y, u, v) / 2.0, a) * u * v)
    }

    /// `U(x,y)/4 = E_k^G + h(x)h(y)E_{k+1}^G/η_k` with the given `λ`.
    pub fn quarter_u_with(&self, x: [f64; 2], y: [f64; 2], lambda: f64) -> f64 {
        self.bessel(x, y) + lambda * self.uv_moment(x, y)
    }

    pub fn quarter_u(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        self.quarter_u_with(x, y, self.lambda)
    }

    /// `E_k(x, y)` from the integral representation; `x` must lie off every
    /// mirror and `y ≠ 0`.
    pub fn kernel(&self, x: [f64; 2], y: [f64; 2]) -> Result<Complex64> {
        if y == [0.0, 0.0] {
            return Err(Error::Chart("y = 0 has no complex chart; the recovery divides by y".into()));
        }
        let scale = x[0].hypot(x[1]);
        for (j, (alpha, _)) in self.roots.iter().enumerate() {
            let d = alpha[0] * x[0] + alpha[1] * x[1];
            if d.abs() <= MIRROR_TOL * scale {
                return Err(Error::SingularPoint {
                    root: j + 1,
                    detail: format!("⟨α, x⟩ = {d:e}; the difference part divides by it"),
                });
            }
        }
        let (g, grad) = self.t_y_quarter_u(x, y);
        let yc = Complex64::new(y[0], y[1]);
        let mut tbar = Complex64::new(grad[0], grad[1]) / 2.0;
        for (alpha, k) in &self.roots {
            let d = alpha[0] * x[0] + alpha[1] * x[1];
            let reflected = DihedralSystem::reflect_in(*alpha, x);
            let (g_ref, _) = self.t_y_quarter_u(reflected, y);
            tbar += Complex64::new(alpha[0], alpha[1]) * (k / 2.0) * (g - g_ref) / d;
        }
        let ny = y[0] * y[0] + y[1] * y[1];
        Ok((yc * g + 2.0 * tbar) * 2.0 / (yc * ny))
    }

    /// `G = T_y(U/4)` at `x` and its gradient:
    /// `G = ∬ F_{a+1}·D_yZ/(8a)·(1+λuv) + 2λ·S(x)∬ F_a·uv`,
    /// `S(x) = Σ_α k(α)⟨α,y⟩/⟨α,x⟩`.
    fn t_y_quarter_u(&self, x: [f64; 2], y: [f64; 2]) -> (f64, [f64; 2]) {
        let a = self.a();
        let lambda = self.lambda;
        let mut s = 0.0;
        let mut ds = [0.0; 2];
        for (alpha, k) in &self.roots {
            let ax = alpha[0] * x[0] + alpha[1] * x[1];
            let ay = alpha[0] * y[0] + alpha[1] * y[1];
            s += k * ay / ax;
            for i in 0..2 {
                ds[i] -= k * ay * alpha[i] / (ax * ax);
            }
        }
        let mut g = 0.0;
        let mut dg = [0.0; 2];
        let mut uv_f = 0.0;
        let mut uv_df = [0.0; 2];
        for (u, wu) in self.mu_u.iter() {
            for (v, wv) in self.mu_v.iter() {
                let w = wu * wv;
                let half_z = z_form(x, y, u, v) / 2.0;
                let f0 = bessel_series(half_z, a);
                let f1 = bessel_series(half_z, a + 1.0);
                let f2 = bessel_series(half_z, a + 2.0);
                let dz = z_gradient(x, y, u, v);
                let hz = z_hessian(y, u, v);
                let dyz = y[0] * dz[0] + y[1] * dz[1];
                let weight = 1.0 + lambda * u * v;
                g += w * f1 * dyz / (8.0 * a) * weight;
                uv_f += w * f0 * u * v;
                for i in 0..2 {
                    let d_dyz = y[0] * hz[0][i] + y[1] * hz[1][i];
                    let d_f1 = f2 / (4.0 * (a + 1.0)) * dz[i] / 2.0;
                    dg[i] += w * (d_f1 * dyz + f1 * d_dyz) / (8.0 * a) * weight;
                    uv_df[i] += w * f1 / (4.0 * a) * dz[i] / 2.0 * u * v;
                }
            }
        }
        g += 2.0 * lambda * s * uv_f;
        for i in 0..2 {
            dg[i] += 2.0 * lambda * (ds[i] * uv_f + s * uv_df[i]);
        }
        (g, dg)
    }
}

/// `η_k` as printed for I₂(4):
/// `4(2k₁+1)(2k₂+1)/((ν+2)(ν+1))·Π_{j=1}^{4}(2ν+j)`.
pub fn eta_printed(k1: f64, k2: f64) -> f64 {
    let nu = k1 + k2;
    4.0 * (2.0 * k1 + 1.0) * (2.0 * k2 + 1.0) / ((nu + 2.0) * (nu + 1.0)) * (1..=4).map(|j| 2.0 * nu + j as f64).product::<f64>()
}

/// `λ = 4(4ν²−1)(k₁+1)(k₂+1)/η_k`, the constant of the printed
/// integration-by-parts chain.
pub fn lambda_printed(k1: f64, k2: f64, eta: f64) -> f64 {
    let nu = k1 + k2;
    4.0 * (4.0 * nu * nu - 1.0) * (k1 + 1.0) * (k2 + 1.0) / eta
}

/// Outcome of validating `λ` against the series value of `U/4`.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub eta: f64,
    pub eta_printed: f64,
    /// `(2ν+1)(2ν+3)(2k₁+1)(2k₂+1)/η_k`.
    pub formula: f64,
    pub printed: f64,
    /// Least-squares `λ` over the sample points.
    pub best_fit: f64,
    /// Max relative error of `U/4` with each `λ`.
    pub residual_formula: f64,
    pub residual_printed: f64,
    pub residual_best_fit: f64,
    /// Relative error on a sample with `h(y) = 0`, where `λ` drops out.
    pub residual_mirror: f64,
}

/// Generic sample points with `|x||y| ≤ 2`.
pub const LAMBDA_SAMPLES: [([f64; 2], [f64; 2]); 10] = [
    ([0.6, 0.2], [0.9, -0.4]),
    ([0.3, 0.5], [1.0, -0.2]),
    ([-0.7, 0.4], [0.5, 0.8]),
    ([1.1, -0.3], [0.2, 0.6]),
    ([0.2, 0.9], [-1.1, 0.3]),
    ([-0.4, -0.5], [0.7, 1.2]),
    ([0.8, 0.7], [0.6, -0.3]),
    ([0.15, -1.0], [1.3, 0.4]),
    ([-1.2, 0.25], [-0.3, -0.9]),
    ([0.5, 0.45], [1.4, 0.1]),
];

/// Validates `λ` against `U/4` built from the series kernel. Fails with
/// [`Error::ConstantMismatch`] when the formula residual exceeds `1e-4`.
pub fn lambda_const(ops: &DunklOperators<f64>, nodes: usize) -> Result<LambdaReport> {
    let b2 = B2Integral::new(ops, nodes)?;
    const DEGREE: usize = 48;
    let mut rows = Vec::with_capacity(LAMBDA_SAMPLES.len());
    for (x, y) in LAMBDA_SAMPLES {
        let target = ops.u_from_rotations(y, DEGREE)?.evaluate(x).re / 4.0;
        rows.push((target, b2.bessel(x, y), b2.uv_moment(x, y)));
    }
    let residual = |lambda: f64| {
        rows.iter().map(|(t, a, b)| ((a + lambda * b - t) / t).abs()).fold(0.0, f64::max)
    };
    let best_fit = rows.iter().map(|(t, a, b)| b * (t - a)).sum::<f64>() / rows.iter().map(|(_, _, b)| b * b).sum::<f64>();

    let (x, y) = ([0.6, 0.2], [1.0, 0.0]);
    let h = alternating_poly::<f64>(ops.system());
    debug_assert!(h.evaluate(y).norm() < 1e-15);
    let target = ops.u_from_rotations(y, DEGREE)?.evaluate(x).re / 4.0;
    let residual_mirror = ((b2.quarter_u(x, y) - target) / target).abs();

    let printed = lambda_printed(b2.k1, b2.k2, b2.eta);
    let report = LambdaReport {
        eta: b2.eta,
        eta_printed: eta_printed(b2.k1, b2.k2),
        formula: b2.lambda,
        printed,
        best_fit,
        residual_formula: residual(b2.lambda),
        residual_printed: residual(printed),
        residual_best_fit: residual(best_fit),
        residual_mirror,
    };
    if report.residual_formula > 1e-4 {
        return Err(Error::ConstantMismatch {
            formula: report.formula,
            best_fit: report.best_fit,
            residual: report.residual_formula,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Dunkl;

    fn ops(k1: f64, k2: f64) -> Dunkl {
        let sys = DihedralSystem::new(4).unwrap();
        Dunkl::new(sys, ComplexMultiplicity::real(&sys, k1, k2).unwrap())
    }

    #[test]
    fn bessel_matches_series() {
        for (k1, k2) in [(1.0, 1.0), (0.5, 1.5), (1.5, 0.5), (0.3, 2.0)] {
            let d = ops(k1, k2);
            let b2 = B2Integral::new(&d, DEFAULT_NODES).unwrap();
            for (x, y) in LAMBDA_SAMPLES {
                let series = d.generalized_bessel(x, y, 1e-15, 60).unwrap().value.re;
                let quad = b2.bessel(x, y);
                assert!((quad - series).abs() <= 1e-10 * series, "k=({k1},{k2}) {x:?} {y:?}: {quad} vs {series}");
            }
        }
    }

    #[test]
    fn bessel_examples() {
        let b2 = B2Integral::from_multiplicity(1.0, 1.0, DEFAULT_NODES).unwrap();
        assert!((b2.bessel([0.3, 0.4], [0.0, 0.0]) - 1.0).abs() < 1e-14);
        let (x, y) = ([0.6, 0.2], [0.9, -0.4]);
        let base = b2.bessel(x, y);
        let sys = DihedralSystem::new(4).unwrap();
        for g in sys.elements() {
            assert!((b2.bessel(g.act(x), y) - base).abs() <= 1e-12);
        }
        let fine = B2Integral::from_multiplicity(1.0, 1.0, 128).unwrap();
        assert!((fine.bessel(x, y) - base).abs() <= 1e-9);
    }

    #[test]
    fn differentiation_rule() {
        let b2 = B2Integral::from_multiplicity(0.7, 1.2, 8).unwrap();
        let a = b2.a();
        let h = alternating_poly::<f64>(&DihedralSystem::new(4).unwrap());
        let (x, y) = ([0.9, 0.35], [-0.6, 1.1]);
        let hh = (h.evaluate(x) * h.evaluate(y)).re;
        let f = |u: f64, v: f64| bessel_series(z_form(x, y, u, v) / 2.0, a);
        let (u, v, e) = (0.2, -0.3, 1e-4);
        let fd = (f(u + e, v + e) - f(u + e, v - e) - f(u - e, v + e) + f(u - e, v - e)) / (4.0 * e * e);
        let rule = hh / (4.0 * a * (a + 1.0)) * bessel_series(z_form(x, y, u, v) / 2.0, a + 2.0);
        assert!((fd - rule).abs() <= 1e-6 * rule.abs());
    }

    #[test]
    fn eta_against_printed_value() {
        for (k1, k2) in [(0.0, 0.0), (1.0, 1.0), (0.5, 1.5)] {
            let eta = ops(k1, k2).eta().unwrap().re;
            // the printed value uses roots of squared length 2
            assert!((eta_printed(k1, k2) / eta - 16.0).abs() <= 1e-10, "k=({k1},{k2})");
        }
    }

    #[test]
    fn lambda_validation() {
        for (k1, k2) in [(1.0, 1.0), (0.5, 1.5)] {
            let report = lambda_const(&ops(k1, k2), DEFAULT_NODES).unwrap();
            assert!(report.residual_formula <= 1e-6, "{report:?}");
            assert!(report.residual_mirror <= 1e-6);
            assert!((report.best_fit - report.formula).abs() <= 1e-4 * report.formula.abs());
        }
    }

    #[test]
    fn kernel_matches_series() {
        for (k1, k2) in [(1.0, 1.0), (0.5, 1.5)] {
            let d = ops(k1, k2);
            let b2 = B2Integral::new(&d, DEFAULT_NODES).unwrap();
            for (x, y) in LAMBDA_SAMPLES {
                let series = d.dunkl_kernel(x, y, 1e-15, 60).unwrap().value;
                let quad = b2.kernel(x, y).unwrap();
                assert!((quad - series).norm() <= 1e-5 * series.norm(), "{x:?} {y:?}: {quad} vs {series}");
            }
        }
    }

    #[test]
    fn kernel_errors() {
        let b2 = B2Integral::from_multiplicity(1.0, 1.0, 16).unwrap();
        assert!(matches!(b2.kernel([1.0, 1.0], [0.3, 0.2]), Err(Error::SingularPoint { .. })));
        assert!(matches!(b2.kernel([1.0, 0.0], [0.3, 0.2]), Err(Error::SingularPoint { .. })));
        assert!(matches!(b2.kernel([1.0, 0.3], [0.0, 0.0]), Err(Error::Chart(_))));
        assert!(matches!(B2Integral::from_multiplicity(0.0, 1.0, 16), Err(Error::Domain(_))));
        let sys = DihedralSystem::new(6).unwrap();
        let d = DunklOperators::new(sys, ComplexMultiplicity::real(&sys, 1.0, 1.0).unwrap());
        assert!(matches!(B2Integral::new(&d, 16), Err(Error::Validation(_))));
    }
}
