//! The shift principle, the rotation sum `U(x,y) = Σ_j E_k(x, r_j y)` and the
//! recovery of `E_k` from `U` by complex Dunkl operators.
//!
//! `T = (T₁ − iT₂)/2` and `T̄ = (T₁ + iT₂)/2` act on `E_k(·,y)` by `ȳ/2` and
//! `y/2` in the complex chart `y = y₁ + iy₂`. Every recovery here is a
//! polynomial in `T₁, T₂` that kills all rotated copies `E_k(·, r_j y)`,
//! `j ≠ 0`, so it is applied degree by degree: an operator of order `d` maps
//! `U_{n+d}` to the degree-`n` part of `E_k`.

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::alternating_poly;
use crate::operator::DunklOperators;
use crate::poly::HomogeneousPolynomial;
use crate::scalar::{lit, re, Real};

type Poly<R> = HomogeneousPolynomial<R>;

/// How a [`GradedU`] was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UProvenance {
    /// `Σ_{j<s} E_n(·, r_j y)`.
    RotationSum,
    /// `(|G|/2){E_k^G + h(·)h(y)E_{k+1}^G/η_k}`.
    ShiftDefinition,
}

/// Homogeneous components `U_0, …, U_N` of `U(·, y)`.
#[derive(Clone, Debug)]
pub struct GradedU<R> {
    pub y: [R; 2],
    pub components: Vec<HomogeneousPolynomial<R>>,
    pub provenance: UProvenance,
}

impl<R: Real> GradedU<R> {
    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &HomogeneousPolynomial<R> {
        &self.components[n]
    }

    pub fn evaluate(&self, x: [R; 2]) -> Complex<R> {
        self.components.iter().fold(Complex::zero(), |acc, p| acc + p.evaluate(x))
    }
}

fn chart<R: Real>(y: [R; 2]) -> Result<Complex<R>> {
    if y[0].is_zero() && y[1].is_zero() {
        return Err(Error::Chart("y = 0 has no complex chart; the recovery divides by y".into()));
    }
    Ok(Complex::new(y[0], y[1]))
}

fn norm_sq<R: Real>(y: [R; 2]) -> R {
    y[0] * y[0] + y[1] * y[1]
}

/// `(f₀, f₁, f₂)` with `E_k = f₀U + f₁T₁U + f₂T₂U` on I₂(3).
pub fn i23_coefficients<R: Real>(y: [R; 2]) -> Result<[R; 3]> {
    chart(y)?;
    let scale = lit::<R>(2.0 / 3.0) / norm_sq(y);
    Ok([lit(1.0 / 3.0), scale * y[0], scale * y[1]])
}

impl<R: Real> DunklOperators<R> {
    /// `T p` (`conj = false`) or `T̄ p` (`conj = true`).
    pub fn apply_t(&self, p: &Poly<R>, conj: bool) -> Result<Poly<R>> {
        let half = lit::<R>(0.5);
        let im = if conj { half } else { -half };
        self.apply_dunkl_complex([re(half), Complex::new(R::zero(), im)], p)
    }

    /// `U_n = Σ_j E_n(·, r_j y)`, using `E_n(x, gy) = E_n(g⁻¹x, y)`.
    pub fn u_from_rotations(&self, y: [R; 2], max_degree: usize) -> Result<GradedU<R>> {
        let sys = self.system();
        let inverses: Vec<_> = (0..sys.s() as i64).map(|j| sys.rotation(j).inverse()).collect();
        let components = (0..=max_degree)
            .map(|n| {
                let e = self.e_n(n, y)?;
                let mut acc = Poly::zero(n);
                for g in &inverses {
                    acc.add_assign_scaled(&e.group_action(g), Complex::one());
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedU { y, components, provenance: UProvenance::RotationSum })
    }

    /// `U` through the shift principle. Needs `η_k ≠ 0` and the operators for
    /// `k + 1`; the `E_{k+1}^G` component of degree `m` lands in degree `m + s`.
    pub fn u_from_definition(&self, y: [R; 2], max_degree: usize) -> Result<GradedU<R>> {
        let sys = self.system();
        let s = sys.s() as usize;
        let eta = self.eta()?;
        if eta.norm() <= lit(1e-12) {
            return Err(Error::DegenerateMultiplicity(format!("η_k = {eta} vanishes")));
        }
        let h = alternating_poly::<R>(sys);
        let hy = h.evaluate(y);
        let half_order = lit::<R>(sys.order() as f64 / 2.0);
        let shifted = (max_degree >= s && !hy.is_zero()).then(|| self.shifted());
        let components = (0..=max_degree)
            .map(|n| {
                let mut u = self.bessel_component(n, y)?;
                if let (Some(up), true) = (&shifted, n >= s) {
                    let b = up.bessel_component(n - s, y)?;
                    u.add_assign_scaled(&(&h * &b), hy / eta);
                }
                Ok(u.scale_real(half_order))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedU { y, components, provenance: UProvenance::ShiftDefinition })
    }

    /// Both sides of the shift principle at `(x, y)`:
    /// `E_{k+1}^G(x,y)` and `η_k/(|G|h(x)h(y))·Σ_g det(g)E_k(x, gy)`.
    pub fn shift_principle(&self, x: [R; 2], y: [R; 2], tol: R, max_degree: usize) -> Result<(Complex<R>, Complex<R>)> {
        let sys = self.system();
        let h = alternating_poly::<R>(sys);
        let hxy = h.evaluate(x) * h.evaluate(y);
        let scale = (x[0].hypot(x[1]) * y[0].hypot(y[1])).powi(sys.s() as i32);
        if hxy.norm() <= lit::<R>(1e-12) * scale {
            return Err(Error::Domain("x or y lies on a mirror line, h(x)h(y) = 0".into()));
        }
        let mut signed = Complex::<R>::zero();
        for g in sys.elements() {
            let v = self.dunkl_kernel(x, g.act(y), tol, max_degree)?.require_converged()?;
            signed = signed + v.value.scale(lit(g.det() as f64));
        }
        let rhs = signed * self.eta()? / (hxy * lit::<R>(sys.order() as f64));
        let lhs = self.shifted().generalized_bessel(x, y, tol, max_degree)?.require_converged()?.value;
        Ok((lhs, rhs))
    }

    /// `E_0(·,y), …, E_N(·,y)` recovered from `U` for even `s = 2q`:
    /// `E_n = [y·P U_{n+q−1} + 2T̄ P U_{n+q}] / (2y Π_j |y|² sin(jπ/q))`,
    /// with `P = Π_{j<q} L_j` and `L_j = ⟨c_j, T⟩`, `c_j ⊥ r_j y`.
    pub fn recover_even_graded(&self, y: [R; 2], max_degree: usize) -> Result<Vec<Poly<R>>> {
        let q = self.even_half()?;
        let yc = chart(y)?;
        let u = self.u_from_rotations(y, max_degree + q)?;
        let mut divisor = yc.scale(lit(2.0));
        let mut directions = Vec::with_capacity(q - 1);
        for j in 1..q {
            let theta = lit::<R>(j as f64 * std::f64::consts::PI / q as f64);
            let (sin, cos) = theta.sin_cos();
            directions.push([y[0] * sin + y[1] * cos, y[1] * sin - y[0] * cos]);
            divisor = divisor.scale(norm_sq(y) * sin);
        }
        let reduced = (q - 1..=max_degree + q)
            .map(|m| {
                directions
                    .iter()
                    .try_fold(u.component(m).clone(), |p, c| self.apply_dunkl(*c, &p))
            })
            .collect::<Result<Vec<_>>>()?;
        // reduced[i] has degree i
        (0..=max_degree)
            .map(|n| {
                let mut e = reduced[n].scale(yc);
                e.add_assign_scaled(&self.apply_t(&reduced[n + 1], true)?, lit::<R>(2.0).into());
                Ok(e.scale(Complex::<R>::one() / divisor))
            })
            .collect()
    }

    /// Same reconstruction with the product `Π_j [ω^j T − ω̄^j T̄]`,
    /// `ω = e^{iπ/q}`, divided by `2y Π_j i·Im(ω^j ȳ)`. This operator does
    /// not depend on `y` and therefore does not annihilate the rotated copies
    /// of the kernel; it is kept to measure how far it is from `E_k`.
    pub fn recover_even_graded_product_form(&self, y: [R; 2], max_degree: usize) -> Result<Vec<Poly<R>>> {
        let q = self.even_half()?;
        let yc = chart(y)?;
        let u = self.u_from_rotations(y, max_degree + q)?;
        let half = lit::<R>(0.5);
        let t_dir = [re(half), Complex::new(R::zero(), -half)];
        let tbar_dir = [re(half), Complex::new(R::zero(), half)];
        let mut divisor = yc.scale(lit(2.0));
        let mut directions = Vec::with_capacity(q - 1);
        for j in 1..q {
            let w = Complex::from_polar(R::one(), lit(j as f64 * std::f64::consts::PI / q as f64));
            let im = (w * yc.conj()).im;
            if im.abs() <= lit::<R>(1e-14) * yc.norm() {
                return Err(Error::Chart(format!("factor j = {j}: Im(ω^j ȳ) vanishes")));
            }
            divisor = divisor * Complex::new(R::zero(), im);
            directions.push([w * t_dir[0] - w.conj() * tbar_dir[0], w * t_dir[1] - w.conj() * tbar_dir[1]]);
        }
        let reduced = (q - 1..=max_degree + q)
            .map(|m| {
                directions
                    .iter()
                    .try_fold(u.component(m).clone(), |p, c| self.apply_dunkl_complex(*c, &p))
            })
            .collect::<Result<Vec<_>>>()?;
        (0..=max_degree)
            .map(|n| {
                let mut e = reduced[n].scale(yc);
                e.add_assign_scaled(&self.apply_t(&reduced[n + 1], true)?, lit::<R>(2.0).into());
                Ok(e.scale(Complex::<R>::one() / divisor))
            })
            .collect()
    }

    /// `E_k(x,y)` recovered from `U` for even `s`, summed to degree `N`.
    pub fn recover_kernel_even(&self, x: [R; 2], y: [R; 2], max_degree: usize) -> Result<Complex<R>> {
        Ok(sum_at(&self.recover_even_graded(y, max_degree)?, x))
    }

    /// `(T_y U)_n` and `|y|²(E_n(·,y) − E_n(·,−y))` for `n ≤ N` on I₂(4), where
    /// `T_y = y₁T₁ + y₂T₂`.
    pub fn ident1_graded(&self, y: [R; 2], max_degree: usize) -> Result<Vec<(Poly<R>, Poly<R>)>> {
        self.require_s(4)?;
        let u = self.u_from_rotations(y, max_degree + 1)?;
        let neg = [-y[0], -y[1]];
        (0..=max_degree)
            .map(|n| {
                let lhs = self.apply_dunkl(y, u.component(n + 1))?;
                let rhs = (&self.e_n(n, y)? - &self.e_n(n, neg)?).scale_real(norm_sq(y));
                Ok((lhs, rhs))
            })
            .collect()
    }

    /// `E_n = [y·(T_y U)_n + 2T̄(T_y U)_{n+1}] / (2y|y|²)` on I₂(4).
    pub fn recover_b2_graded(&self, y: [R; 2], max_degree: usize) -> Result<Vec<Poly<R>>> {
        self.require_s(4)?;
        let yc = chart(y)?;
        let u = self.u_from_rotations(y, max_degree + 2)?;
        let tyu = (1..=max_degree + 2)
            .map(|m| self.apply_dunkl(y, u.component(m)))
            .collect::<Result<Vec<_>>>()?;
        let divisor = yc.scale(lit::<R>(2.0) * norm_sq(y));
        (0..=max_degree)
            .map(|n| {
                let mut e = tyu[n].scale(yc);
                e.add_assign_scaled(&self.apply_t(&tyu[n + 1], true)?, lit::<R>(2.0).into());
                Ok(e.scale(Complex::<R>::one() / divisor))
            })
            .collect()
    }

    pub fn recover_kernel_b2(&self, x: [R; 2], y: [R; 2], max_degree: usize) -> Result<Complex<R>> {
        Ok(sum_at(&self.recover_b2_graded(y, max_degree)?, x))
    }

    /// `E_n = f₀U_n + f₁T₁U_{n+1} + f₂T₂U_{n+1}` on I₂(3).
    pub fn recover_i23_graded(&self, y: [R; 2], max_degree: usize) -> Result<Vec<Poly<R>>> {
        let s = self.system().s();
        if s != 3 {
            return Err(if s % 2 == 1 {
                Error::Domain(format!(
                    "no first-order recovery exists for odd s = {s}; the I₂(3) combination does not extend"
                ))
            } else {
                Error::Validation(format!("s = {s} is even; use the even recovery"))
            });
        }
        let [f0, f1, f2] = i23_coefficients(y)?;
        let u = self.u_from_rotations(y, max_degree + 1)?;
        (0..=max_degree)
            .map(|n| {
                let next = u.component(n + 1);
                let mut e = u.component(n).scale_real(f0);
                e.add_assign_scaled(&self.apply_dunkl([R::one(), R::zero()], next)?, re(f1));
                e.add_assign_scaled(&self.apply_dunkl([R::zero(), R::one()], next)?, re(f2));
                Ok(e)
            })
            .collect()
    }

    pub fn recover_kernel_i23(&self, x: [R; 2], y: [R; 2], max_degree: usize) -> Result<Complex<R>> {
        Ok(sum_at(&self.recover_i23_graded(y, max_degree)?, x))
    }

    /// The recovery that applies to this system: even `s` or `s = 3`.
    pub fn recover_kernel(&self, x: [R; 2], y: [R; 2], max_degree: usize) -> Result<Complex<R>> {
        if self.system().is_even() {
            self.recover_kernel_even(x, y, max_degree)
        } else {
            self.recover_kernel_i23(x, y, max_degree)
        }
    }

    fn even_half(&self) -> Result<usize> {
        self.system()
            .half()
            .map(|q| q as usize)
            .ok_or_else(|| Error::Validation(format!("s = {} is odd; the even recovery needs s = 2q", self.system().s())))
    }

    fn require_s(&self, s: u32) -> Result<()> {
        if self.system().s() != s {
            return Err(Error::Validation(format!("this identity is specific to s = {s}, got s = {}", self.system().s())));
        }
        Ok(())
    }
}

fn sum_at<R: Real>(components: &[Poly<R>], x: [R; 2]) -> Complex<R> {
    components.iter().fold(Complex::zero(), |acc, p| acc + p.evaluate(x))
}

/// `|G|⁻¹ Σ_g det(g)·(p∘g)`, the projection onto alternating polynomials.
pub fn alternating_part<R: Real>(p: &Poly<R>, sys: &crate::group::DihedralSystem) -> Poly<R> {
    let mut acc = Poly::zero(p.degree());
    for g in sys.elements() {
        acc.add_assign_scaled(&p.group_action(&g), re(lit(g.det() as f64)));
    }
    acc.scale_real(R::one() / lit::<R>(sys.order() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexMultiplicity, DihedralSystem, Dunkl, Poly};

    fn ops(s: u32, k1: f64, k2: f64) -> Dunkl {
        let sys = DihedralSystem::new(s).unwrap();
        Dunkl::new(sys, ComplexMultiplicity::real(&sys, k1, k2).unwrap())
    }

    const Y: [f64; 2] = [0.8, -0.45];
    const X: [f64; 2] = [0.35, 0.7];

    #[test]
    fn t_examples() {
        let free = ops(4, 0.0, 0.0);
        let z = Poly::new(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)]);
        let tz = free.apply_t(&z, false).unwrap();
        assert!((tz.coeff(0) - Complex::one()).norm() < 1e-15);
        assert!(free.apply_t(&Poly::new(vec![Complex::one(), Complex::new(0.0, -1.0)]), false).unwrap().norm_max() < 1e-15);

        let d = ops(6, 0.7, 1.3);
        let yc = Complex::new(Y[0], Y[1]);
        for n in 0..5 {
            let e = d.e_n(n, Y).unwrap();
            let next = d.e_n(n + 1, Y).unwrap();
            let t = d.apply_t(&next, false).unwrap();
            let tbar = d.apply_t(&next, true).unwrap();
            assert!(t.abs_diff(&e.scale(yc.conj() / 2.0)) <= 1e-9 * e.norm_max());
            assert!(tbar.abs_diff(&e.scale(yc / 2.0)) <= 1e-9 * e.norm_max());
        }
    }

    #[test]
    fn rotation_sum_examples() {
        for s in [3u32, 4, 5, 6] {
            let d = ops(s, 0.6, if s % 2 == 0 { 1.1 } else { 0.6 });
            let u = d.u_from_rotations(Y, 4).unwrap();
            assert!((u.component(0).coeff(0).re - s as f64).abs() < 1e-14);
            assert!(u.component(1).norm_max() < 1e-13);
            let sys = d.system();
            for j in 0..s as i64 {
                let ry = sys.rotation(j).act(Y);
                let v = d.u_from_rotations(ry, 4).unwrap();
                for n in 0..=4 {
                    assert!(v.component(n).abs_diff(u.component(n)) <= 1e-10, "s={s} j={j} n={n}");
                }
            }
            // against independent components at rotated arguments
            for n in 0..=4 {
                let mut direct = Poly::zero(n);
                for j in 0..s as i64 {
                    direct.add_assign_scaled(&d.e_n(n, sys.rotation(j).act(Y)).unwrap(), Complex::one());
                }
                assert!(direct.abs_diff(u.component(n)) <= 1e-10);
            }
        }
    }

    #[test]
    fn definition_matches_rotation_sum() {
        for (k1, k2) in [(0.0, 0.0), (1.0, 1.0), (0.5, 1.5)] {
            let d = ops(4, k1, k2);
            let rot = d.u_from_rotations(Y, 10).unwrap();
            let def = d.u_from_definition(Y, 10).unwrap();
            assert_eq!(def.provenance, UProvenance::ShiftDefinition);
            for n in 0..=10 {
                assert!(rot.component(n).abs_diff(def.component(n)) <= 1e-9, "k=({k1},{k2}) n={n}");
            }
            assert!((rot.evaluate(X) - def.evaluate(X)).norm() <= 1e-8);
        }
        let d = ops(3, 0.8, 0.8);
        let rot = d.u_from_rotations(Y, 8).unwrap();
        let def = d.u_from_definition(Y, 8).unwrap();
        assert!((rot.evaluate(X) - def.evaluate(X)).norm() <= 1e-8);
    }

    #[test]
    fn definition_on_a_mirror_line() {
        let d = ops(4, 1.0, 0.5);
        let y = [1.0, 0.0];
        let def = d.u_from_definition(y, 6).unwrap();
        for n in 0..=6 {
            let expected = d.bessel_component(n, y).unwrap().scale_real(4.0);
            assert!(def.component(n).abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn shift_principle_identity() {
        for (s, k1, k2) in [(4u32, 1.0, 1.0), (4, 0.5, 1.5), (3, 0.7, 0.7), (6, 0.4, 0.9)] {
            let d = ops(s, k1, k2);
            let (lhs, rhs) = d.shift_principle([0.9, 0.4], [0.7, -1.1], 1e-15, 60).unwrap();
            assert!((lhs - rhs).norm() <= 1e-7 * lhs.norm(), "s={s}: {lhs} vs {rhs}");
        }
        let d = ops(4, 1.0, 1.0);
        assert!(matches!(d.shift_principle([1.0, 0.0], Y, 1e-12, 40), Err(Error::Domain(_))));
    }

    #[test]
    fn even_recovery_per_degree() {
        for (s, k1, k2) in [(2u32, 0.3, 0.8), (4, 1.0, 1.0), (4, 0.5, 1.5), (6, 0.7, 0.2)] {
            let d = ops(s, k1, k2);
            let rec = d.recover_even_graded(Y, 6).unwrap();
            assert!((rec[0].coeff(0) - Complex::one()).norm() < 1e-12);
            for (n, e) in rec.iter().enumerate() {
                let expected = d.e_n(n, Y).unwrap();
                assert!(e.rel_diff(&expected) <= 1e-9, "s={s} n={n}: {}", e.rel_diff(&expected));
            }
            let full = d.recover_kernel_even(X, Y, 30).unwrap();
            let series = d.dunkl_kernel(X, Y, 1e-15, 60).unwrap().value;
            assert!((full - series).norm() <= 1e-8 * series.norm());
        }
    }

    #[test]
    fn product_form_differs_from_the_kernel() {
        let d = ops(6, 0.7, 0.2);
        let rec = d.recover_even_graded_product_form(Y, 4).unwrap();
        let worst = (0..=4).map(|n| rec[n].rel_diff(&d.e_n(n, Y).unwrap())).fold(0.0, f64::max);
        assert!(worst > 1e-3);
        assert!(matches!(d.recover_even_graded_product_form([0.5, 0.75f64.sqrt()], 2), Err(Error::Chart(_))));
    }

    #[test]
    fn b2_identities() {
        let d = ops(4, 0.5, 1.5);
        for (n, (lhs, rhs)) in d.ident1_graded(Y, 6).unwrap().into_iter().enumerate() {
            assert!(lhs.abs_diff(&rhs) <= 1e-9 * (1.0 + rhs.norm_max()), "n={n}");
        }
        let b2 = d.recover_b2_graded(Y, 6).unwrap();
        let even = d.recover_even_graded(Y, 6).unwrap();
        assert!((b2[0].coeff(0) - Complex::one()).norm() < 1e-12);
        for n in 0..=6 {
            assert!(b2[n].abs_diff(&even[n]) <= 1e-10);
            assert!(b2[n].rel_diff(&d.e_n(n, Y).unwrap()) <= 1e-9);
        }
        let v = d.recover_kernel_b2(X, Y, 30).unwrap();
        let series = d.dunkl_kernel(X, Y, 1e-15, 60).unwrap().value;
        assert!((v - series).norm() <= 1e-8 * series.norm());
        assert!(matches!(d.recover_kernel_b2(X, [0.0, 0.0], 10), Err(Error::Chart(_))));
        assert!(matches!(ops(6, 1.0, 1.0).recover_b2_graded(Y, 2), Err(Error::Validation(_))));
    }

    #[test]
    fn i23_recovery() {
        assert_eq!(i23_coefficients([1.0, 0.0]).unwrap(), [1.0 / 3.0, 2.0 / 3.0, 0.0]);
        let f: [f64; 3] = i23_coefficients([0.0, 1.0]).unwrap();
        assert!(f[1].abs() < 1e-16 && (f[2] - 2.0 / 3.0).abs() < 1e-16);
        for k in [0.5, 1.0] {
            let d = ops(3, k, k);
            for (n, e) in d.recover_i23_graded(Y, 6).unwrap().iter().enumerate() {
                assert!(e.rel_diff(&d.e_n(n, Y).unwrap()) <= 1e-9, "n={n}");
            }
            let v = d.recover_kernel(X, Y, 30).unwrap();
            let series = d.dunkl_kernel(X, Y, 1e-15, 60).unwrap().value;
            assert!((v - series).norm() <= 1e-8 * series.norm());
        }
        assert!(matches!(ops(5, 1.0, 1.0).recover_kernel(X, Y, 10), Err(Error::Domain(_))));
        assert!(matches!(ops(3, 1.0, 1.0).recover_kernel(X, [0.0, 0.0], 10), Err(Error::Chart(_))));
    }

    #[test]
    fn alternating_part_of_h_is_h() {
        let sys = DihedralSystem::new(5).unwrap();
        let h = alternating_poly::<f64>(&sys);
        assert!(alternating_part(&h, &sys).abs_diff(&h) < 1e-14);
        assert!(crate::kernel::group_average(&h, &sys).norm_max() < 1e-14);
    }
}
