//! Homogeneous polynomials in two real variables with complex coefficients.
//!
//! A degree-`n` polynomial stores `n + 1` coefficients; entry `i` multiplies
//! the monomial `x₁^{n-i} x₂^{i}`. The zero polynomial of any degree is
//! representable, since the degree is carried by the container and not by a
//! leading coefficient.

use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{DihedralElement, DihedralSystem};
use crate::scalar::{binomial, consistency_tol, lit, re, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial<R> {
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> HomogeneousPolynomial<R> {
    /// Coefficients ordered from `x₁ⁿ` down to `x₂ⁿ`.
    pub fn new(coeffs: Vec<Complex<R>>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[R]) -> Self {
        Self::new(coeffs.iter().map(|&c| re(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Complex::zero(); degree + 1] }
    }

    pub fn constant(c: Complex<R>) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex::one())
    }

    /// `c·x₁^{a}·x₂^{b}`.
    pub fn monomial(a: usize, b: usize, c: Complex<R>) -> Self {
        let mut p = Self::zero(a + b);
        p.coeffs[b] = c;
        p
    }

    /// The linear form `ξ₁x₁ + ξ₂x₂`.
    pub fn linear(xi: [Complex<R>; 2]) -> Self {
        Self { coeffs: xi.to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<R>] {
        &mut self.coeffs
    }

    /// Coefficient of `x₁^{n-i} x₂^{i}`.
    pub fn coeff(&self, i: usize) -> Complex<R> {
        self.coeffs[i]
    }

    /// Sum of coefficient moduli.
    pub fn norm_l1(&self) -> R {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn norm_max(&self) -> R {
        self.coeffs.iter().map(|c| c.norm()).fold(R::zero(), R::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Constant term of a degree-0 polynomial.
    pub fn as_constant(&self) -> Option<Complex<R>> {
        (self.degree() == 0).then(|| self.coeffs[0])
    }

    pub fn evaluate(&self, x: [R; 2]) -> Complex<R> {
        let n = self.degree();
        let mut pow2 = R::one();
        let mut pow1 = vec![R::one(); n + 1];
        for a in 1..=n {
            pow1[a] = pow1[a - 1] * x[0];
        }
        let mut acc = Complex::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc + c.scale(pow1[n - i] * pow2);
            pow2 = pow2 * x[1];
        }
        acc
    }

    pub fn evaluate_complex(&self, x: [Complex<R>; 2]) -> Complex<R> {
        let n = self.degree();
        let mut acc = Complex::zero();
        let mut pow2 = Complex::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc + *c * x[0].powu((n - i) as u32) * pow2;
            pow2 = pow2 * x[1];
        }
        acc
    }

    pub fn scale(&self, c: Complex<R>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| *v * c).collect() }
    }

    pub fn scale_real(&self, c: R) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v.scale(c)).collect() }
    }

    /// Adds `other` in place; degrees must agree.
    pub fn add_assign_scaled(&mut self, other: &Self, c: Complex<R>) {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in polynomial sum");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = *a + *b * c;
        }
    }

    /// `∂p/∂x₁` (`var = 0`) or `∂p/∂x₂` (`var = 1`).
    pub fn partial(&self, var: usize) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (0..n)
            .map(|i| match var {
                // x₁^{n-i}x₂^{i} → (n-i) x₁^{n-1-i}x₂^{i}
                0 => self.coeffs[i].scale(lit((n - i) as f64)),
                // x₁^{n-i-1}x₂^{i+1} → (i+1) x₁^{n-1-i}x₂^{i}
                _ => self.coeffs[i + 1].scale(lit((i + 1) as f64)),
            })
            .collect();
        Self { coeffs }
    }

    /// `ξ₁∂₁p + ξ₂∂₂p`. A degree-0 input yields the zero constant.
    pub fn directional_derivative(&self, xi: [R; 2]) -> Self {
        self.directional_derivative_complex([re(xi[0]), re(xi[1])])
    }

    pub fn directional_derivative_complex(&self, xi: [Complex<R>; 2]) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        let mut out = self.partial(0).scale(xi[0]);
        out.add_assign_scaled(&self.partial(1), xi[1]);
        out
    }

    /// `x ↦ p(Mx)` for a real 2×2 matrix `M`.
    pub fn compose_linear(&self, m: [[R; 2]; 2]) -> Self {
        let n = self.degree();
        let row = |r: usize| Self::linear([re(m[r][0]), re(m[r][1])]);
        let powers = |lin: Self| {
            let mut out = vec![Self::one()];
            for _ in 0..n {
                let next = &out[out.len() - 1] * &lin;
                out.push(next);
            }
            out
        };
        let p1 = powers(row(0));
        let p2 = powers(row(1));
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.add_assign_scaled(&(&p1[n - i] * &p2[i]), *c);
        }
        out
    }

    /// `(g·p)(x) = p(gx)`.
    pub fn group_action(&self, g: &DihedralElement) -> Self {
        if g.is_identity() {
            return self.clone();
        }
        self.compose_linear(g.matrix())
    }

    /// The Dunkl divided difference `(p(x) − p(σ_α x)) / ⟨α, x⟩` for a unit
    /// root `α`.
    pub fn divided_difference(&self, alpha: [R; 2]) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let two = lit::<R>(2.0);
        let a = alpha;
        // σ_α = I - 2αα^T
        let sigma = [
            [R::one() - two * a[0] * a[0], -two * a[0] * a[1]],
            [-two * a[1] * a[0], R::one() - two * a[1] * a[1]],
        ];
        let mut diff = self.clone();
        diff.add_assign_scaled(&self.compose_linear(sigma), -Complex::one());
        let (quotient, remainder) = diff.divide_linear(alpha);
        let scale = self.norm_l1().max(R::min_positive_value());
        if remainder.norm() > consistency_tol::<R>() * scale {
            return Err(Error::Consistency(format!(
                "divided difference remainder {:e} exceeds tolerance for degree {} (norm {:e})",
                remainder.norm().to_f64().unwrap_or(f64::NAN),
                n,
                scale.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(quotient)
    }

    /// Synthetic division by `ℓ(x) = α₁x₁ + α₂x₂`; returns the quotient and
    /// the scalar remainder. Works from whichever end keeps the recursion
    /// ratio at most one in modulus.
    pub fn divide_linear(&self, alpha: [R; 2]) -> (Self, Complex<R>) {
        let n = self.degree();
        if n == 0 {
            return (Self::zero(0), self.coeffs[0]);
        }
        let q = &self.coeffs;
        let mut r = vec![Complex::zero(); n];
        // q_i = α₁ r_i + α₂ r_{i-1}
        if alpha[0].abs() >= alpha[1].abs() {
            for i in 0..n {
                let prev = if i == 0 { Complex::zero() } else { r[i - 1] };
                r[i] = (q[i] - prev.scale(alpha[1])).unscale(alpha[0]);
            }
            let rem = q[n] - r[n - 1].scale(alpha[1]);
            (Self { coeffs: r }, rem)
        } else {
            for i in (0..n).rev() {
                let next = if i + 1 == n { Complex::zero() } else { r[i + 1] };
                r[i] = (q[i + 1] - next.scale(alpha[0])).unscale(alpha[1]);
            }
            let rem = q[0] - r[0].scale(alpha[0]);
            (Self { coeffs: r }, rem)
        }
    }

    /// `⟨x, y⟩ⁿ` expanded in the monomial basis.
    pub fn inner_power(y: [R; 2], n: usize) -> Self {
        let coeffs = (0..=n)
            .map(|i| re(binomial::<R>(n, i) * y[0].powi((n - i) as i32) * y[1].powi(i as i32)))
            .collect();
        Self { coeffs }
    }

    /// `⟨x, y⟩ⁿ` for a complex `y`.
    pub fn inner_power_complex(y: [Complex<R>; 2], n: usize) -> Self {
        let coeffs = (0..=n)
            .map(|i| y[0].powu((n - i) as u32) * y[1].powu(i as u32) * re(binomial::<R>(n, i)))
            .collect();
        Self { coeffs }
    }

    /// Largest coefficient difference relative to the larger norm of the two.
    pub fn rel_diff(&self, other: &Self) -> R {
        assert_eq!(self.degree(), other.degree());
        let diff = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (*a - *b).norm()).fold(R::zero(), R::max);
        let scale = self.norm_max().max(other.norm_max());
        if scale.is_zero() {
            diff
        } else {
            diff / scale
        }
    }

    pub fn abs_diff(&self, other: &Self) -> R {
        assert_eq!(self.degree(), other.degree());
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (*a - *b).norm()).fold(R::zero(), R::max)
    }
}

/// Reflection of a polynomial through the mirror of a positive root.
pub fn reflect<R: Real>(p: &HomogeneousPolynomial<R>, alpha: [R; 2]) -> HomogeneousPolynomial<R> {
    let image = |e: [R; 2]| DihedralSystem::reflect_in(alpha, e);
    let (c0, c1) = (image([R::one(), R::zero()]), image([R::zero(), R::one()]));
    p.compose_linear([[c0[0], c1[0]], [c0[1], c1[1]]])
}

impl<R: Real> Add for &HomogeneousPolynomial<R> {
    type Output = HomogeneousPolynomial<R>;
    fn add(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, Complex::one());
        out
    }
}

impl<R: Real> Sub for &HomogeneousPolynomial<R> {
    type Output = HomogeneousPolynomial<R>;
    fn sub(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, -Complex::<R>::one());
        out
    }
}

impl<R: Real> Neg for &HomogeneousPolynomial<R> {
    type Output = HomogeneousPolynomial<R>;
    fn neg(self) -> Self::Output {
        self.scale(-Complex::<R>::one())
    }
}

impl<R: Real> Mul for &HomogeneousPolynomial<R> {
    type Output = HomogeneousPolynomial<R>;
    fn mul(self, rhs: Self) -> Self::Output {
        let mut out = HomogeneousPolynomial::zero(self.degree() + rhs.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[i + j] = out.coeffs[i + j] + *a * *b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn real(c: &[f64]) -> Poly {
        Poly::from_real(c)
    }

    #[test]
    fn evaluation_examples() {
        // x₁²x₂ in degree 3: coefficient index 1
        let p = real(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(p.evaluate([2.0, 3.0]).re, 12.0);
        assert_eq!(Poly::one().evaluate([5.0, -7.0]).re, 1.0);
        assert!(Poly::zero(4).evaluate([1.3, 2.2]).norm() == 0.0);
    }

    #[test]
    fn derivative_examples() {
        let p = real(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(p.directional_derivative([1.0, 0.0]), real(&[0.0, 2.0, 0.0]));
        let cube = real(&[0.0, 0.0, 0.0, 1.0]);
        assert!(cube.directional_derivative([1.0, 0.0]).is_zero());
        let y = [0.4, -1.3];
        let xi = [0.7, 0.2];
        let d = Poly::inner_power(y, 5).directional_derivative(xi);
        let expected = Poly::inner_power(y, 4).scale_real(5.0 * (xi[0] * y[0] + xi[1] * y[1]));
        assert!(d.rel_diff(&expected) < 1e-14);
        let c = Poly::constant(Complex::new(3.0, 1.0));
        assert_eq!(c.directional_derivative([1.0, 1.0]), Poly::zero(0));
    }

    #[test]
    fn group_action_examples() {
        let p = real(&[1.0, 0.0]); // x₁
        let r1 = DihedralElement::rotation(4, 1);
        // r₁x = (−x₂, x₁)
        assert!(p.group_action(&r1).rel_diff(&real(&[0.0, -1.0])) < 1e-15);
        let q = real(&[0.3, -1.0, 2.0, 0.5]);
        assert_eq!(q.group_action(&DihedralElement::identity(4)), q);
        for s in 2..7 {
            for j in 0..s {
                let g = DihedralElement::reflection(s, j as i64);
                let twice = q.group_action(&g).group_action(&g);
                assert!(twice.abs_diff(&q) <= 1e-13);
            }
        }
    }

    #[test]
    fn divided_difference_examples() {
        let e1 = [1.0, 0.0];
        assert_eq!(real(&[1.0, 0.0, 0.0, 0.0]).divided_difference(e1).unwrap(), real(&[2.0, 0.0, 0.0]));
        assert!(real(&[1.0, 0.0, 0.0]).divided_difference(e1).unwrap().is_zero());
        assert_eq!(real(&[0.0, 1.0, 0.0]).divided_difference(e1).unwrap(), real(&[0.0, 2.0]));
    }

    #[test]
    fn divided_difference_of_inner_power_matches_pointwise_quotient() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for s in [3u32, 4, 5] {
            let roots = DihedralSystem::new(s).unwrap().positive_roots::<f64>();
            for n in 1..=8 {
                let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let p = Poly::inner_power(y, n);
                for root in &roots {
                    let dd = p.divided_difference(root.vector).unwrap();
                    for _ in 0..50 {
                        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                        let ax = root.vector[0] * x[0] + root.vector[1] * x[1];
                        if ax.abs() < 1e-2 {
                            continue;
                        }
                        let sx = DihedralSystem::reflect_in(root.vector, x);
                        let dot = |z: [f64; 2]| z[0] * y[0] + z[1] * y[1];
                        let direct = (dot(x).powi(n as i32) - dot(sx).powi(n as i32)) / ax;
                        assert!((dd.evaluate(x).re - direct).abs() <= 1e-11, "s={s} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn inner_power_examples() {
        assert_eq!(Poly::inner_power([1.0, 0.0], 3), real(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(Poly::inner_power([3.0, 2.0], 0), Poly::one());
        assert_eq!(Poly::inner_power([1.0, 1.0], 2), real(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn group_action_is_an_antihomomorphism() {
        let q = real(&[0.3, -1.0, 2.0, 0.5, 1.25]);
        for s in [3u32, 4, 6] {
            let sys = DihedralSystem::new(s).unwrap();
            for g in sys.elements() {
                for h in sys.elements() {
                    let lhs = q.group_action(&h).group_action(&g);
                    let rhs = q.group_action(&h.compose(&g).unwrap());
                    assert!(lhs.rel_diff(&rhs) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn reflect_matches_group_action() {
        let q = real(&[0.3, -1.0, 2.0, 0.5]);
        let sys = DihedralSystem::new(5).unwrap();
        for root in sys.positive_roots::<f64>() {
            assert!(reflect(&q, root.vector).rel_diff(&q.group_action(&root.reflection)) < 1e-13);
        }
    }
}
