//! Dunkl operators, the group-algebra element `A = Σ k(α)σ_α`, the resolvents
//! `H_n = ((n+γ) − A_n)⁻¹` and the intertwining operator `V_k`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::algebra::GroupAlgebraMap;
use crate::coeffs;
use crate::error::{Error, Result};
use crate::group::{DihedralElement, DihedralSystem, Multiplicity, PositiveRoot};
use crate::kernel::alternating_poly;
use crate::linalg::OperatorMatrix;
use crate::poly::HomogeneousPolynomial;
use crate::scalar::{factorial, lit, re, Real};

/// Condition number above which `(n+γ) − A_n` counts as numerically singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Largest number of terms [`DunklOperators::resolvent_series`] will sum.
const MAX_SERIES_TERMS: usize = 100_000;

/// Dunkl operators for a fixed dihedral system and multiplicity, with a
/// per-degree resolvent cache.
#[derive(Debug)]
pub struct DunklOperators<R: Real> {
    system: DihedralSystem,
    k: Multiplicity<Complex<R>>,
    roots: Vec<PositiveRoot<R>>,
    weights: Vec<Complex<R>>,
    resolvents: RwLock<HashMap<usize, Arc<OperatorMatrix<R>>>>,
}

impl<R: Real> Clone for DunklOperators<R> {
    fn clone(&self) -> Self {
        Self::new(self.system, self.k.clone())
    }
}

type Poly<R> = HomogeneousPolynomial<R>;

impl<R: Real> DunklOperators<R> {
    pub fn new(system: DihedralSystem, k: Multiplicity<Complex<R>>) -> Self {
        let roots = system.positive_roots::<R>();
        let weights = roots.iter().map(|root| k.on_element(&root.reflection)).collect();
        Self { system, k, roots, weights, resolvents: RwLock::new(HashMap::new()) }
    }

    /// Same system with the multiplicity shifted by `+1` on every root.
    pub fn shifted(&self) -> Self {
        Self::new(self.system, self.k.shifted(Complex::one()))
    }

    pub fn system(&self) -> &DihedralSystem {
        &self.system
    }

    pub fn multiplicity(&self) -> &Multiplicity<Complex<R>> {
        &self.k
    }

    pub fn roots(&self) -> &[PositiveRoot<R>] {
        &self.roots
    }

    /// `k(α_j)` aligned with [`Self::roots`].
    pub fn root_weights(&self) -> &[Complex<R>] {
        &self.weights
    }

    pub fn gamma(&self) -> Complex<R> {
        self.k.gamma(&self.system)
    }

    pub fn delta(&self) -> R {
        self.k.delta(&self.system)
    }

    pub fn series_ok(&self) -> bool {
        self.k.series_ok(&self.system)
    }

    /// `T_ξ p = ∂_ξ p + Σ_α k(α)⟨α,ξ⟩ (p − p∘σ_α)/⟨α,·⟩`.
    pub fn apply_dunkl(&self, xi: [R; 2], p: &Poly<R>) -> Result<Poly<R>> {
        self.apply_dunkl_complex([re(xi[0]), re(xi[1])], p)
    }

    /// `ξ₁T₁ + ξ₂T₂` for complex `ξ`.
    pub fn apply_dunkl_complex(&self, xi: [Complex<R>; 2], p: &Poly<R>) -> Result<Poly<R>> {
        if p.degree() == 0 {
            return Ok(Poly::zero(0));
        }
        let mut out = p.directional_derivative_complex(xi);
        for (root, w) in self.roots.iter().zip(&self.weights) {
            if w.is_zero() {
                continue;
            }
            let pairing = xi[0] * root.vector[0] + xi[1] * root.vector[1];
            if pairing.is_zero() {
                continue;
            }
            out.add_assign_scaled(&p.divided_difference(root.vector)?, *w * pairing);
        }
        Ok(out)
    }

    /// `A = Σ_{α∈R₊} k(α) σ_α`.
    pub fn element_a(&self) -> GroupAlgebraMap<Complex<R>> {
        GroupAlgebraMap::from_fn(self.system, |g| self.k.on_element(g))
    }

    /// Matrix of `p ↦ p∘g` on 𝒫_n.
    pub fn element_matrix(&self, n: usize, g: &DihedralElement) -> OperatorMatrix<R> {
        OperatorMatrix::from_action(n, |p| p.group_action(g))
    }

    /// Matrix of `Σ_g c(g)·(p ↦ p∘g)` on 𝒫_n.
    pub fn matrix_of(&self, n: usize, map: &GroupAlgebraMap<Complex<R>>) -> OperatorMatrix<R> {
        let mut out = OperatorMatrix::zeros(n);
        for (g, c) in map.iter() {
            if c.is_zero() {
                continue;
            }
            out.add_scaled(&self.element_matrix(n, &g), *c);
        }
        out
    }

    /// `A_n`.
    pub fn a_matrix(&self, n: usize) -> OperatorMatrix<R> {
        self.matrix_of(n, &self.element_a())
    }

    fn shifted_degree(&self, n: usize) -> Complex<R> {
        re(lit::<R>(n as f64)) + self.gamma()
    }

    /// `H_n` by LU inversion of `(n+γ) − A_n`.
    pub fn resolvent_direct(&self, n: usize) -> Result<OperatorMatrix<R>> {
        if n == 0 {
            return Err(Error::Precondition("resolvents are defined for n >= 1".into()));
        }
        let shifted = OperatorMatrix::identity(n).scale(self.shifted_degree(n));
        let m = &shifted - &self.a_matrix(n);
        match m.inverse_with_condition() {
            Some((inv, cond)) if cond.to_f64().is_some_and(|c| c.is_finite() && c <= CONDITION_LIMIT) => Ok(inv),
            Some((_, cond)) => Err(Error::Regularity { degree: n, condition: cond.to_f64().unwrap_or(f64::INFINITY) }),
            None => Err(Error::Regularity { degree: n, condition: f64::INFINITY }),
        }
    }

    /// Cached [`Self::resolvent_direct`].
    pub fn resolvent(&self, n: usize) -> Result<Arc<OperatorMatrix<R>>> {
        if let Some(h) = self.resolvents.read().expect("resolvent cache poisoned").get(&n) {
            return Ok(Arc::clone(h));
        }
        let h = Arc::new(self.resolvent_direct(n)?);
        let mut cache = self.resolvents.write().expect("resolvent cache poisoned");
        Ok(Arc::clone(cache.entry(n).or_insert(h)))
    }

    /// `H_n = Σ_m A_nᵐ/(n+γ)^{m+1}`, truncated once the geometric tail bound
    /// `K (δ/|n+γ|)^{M+1} / (|n+γ| − δ)` drops below `tol`, where `K` bounds
    /// the norm of every group element acting on 𝒫_n.
    pub fn resolvent_series(&self, n: usize, tol: R) -> Result<OperatorMatrix<R>> {
        if n == 0 {
            return Err(Error::Precondition("resolvents are defined for n >= 1".into()));
        }
        if !self.series_ok() {
            return Err(Error::Precondition(format!(
                "resolvent series needs delta < |1 + gamma|, got delta = {} and |1 + gamma| = {}",
                self.delta(),
                (self.gamma() + Complex::one()).norm()
            )));
        }
        let z = self.shifted_degree(n);
        let delta = self.delta();
        let k_bound = self.system.elements().map(|g| self.element_matrix(n, &g).norm_inf()).fold(R::zero(), R::max);
        let a = self.a_matrix(n);
        let inv_z = Complex::<R>::one() / z;
        let mut term = OperatorMatrix::identity(n).scale(inv_z);
        let mut sum = term.clone();
        let ratio = delta / z.norm();
        let mut tail_factor = k_bound / (z.norm() - delta) * ratio;
        let mut m = 0;
        while tail_factor > tol {
            m += 1;
            if m > MAX_SERIES_TERMS {
                return Err(Error::Convergence(format!("resolvent series at degree {n} needs more than {MAX_SERIES_TERMS} terms")));
            }
            term = (&term * &a).scale(inv_z);
            sum.add_scaled(&term, Complex::one());
            tail_factor = tail_factor * ratio;
        }
        Ok(sum)
    }

    /// `g ↦ C_n(g)`, so that `H_n = Σ_g C_n(g) g`.
    pub fn resolvent_as_group_algebra(&self, n: usize) -> Result<GroupAlgebraMap<Complex<R>>> {
        if !self.series_ok() {
            return Err(Error::Precondition("group-algebra resolvent needs delta < |1 + gamma|".into()));
        }
        coeffs::resolvent_coefficients(n, &self.system, &self.k)
    }

    /// `V_k(p)(x) = (∂_x H)ⁿ p`.
    pub fn intertwine(&self, p: &Poly<R>, x: [R; 2]) -> Result<Complex<R>> {
        let mut q = p.clone();
        for m in (1..=p.degree()).rev() {
            q = self.resolvent(m)?.apply(&q).directional_derivative(x);
        }
        Ok(q.coeff(0))
    }

    /// `x ↦ V_k(p)(x)` as a polynomial. The state is a bihomogeneous array:
    /// entry `i` is the polynomial in the argument variable multiplying
    /// `x₁^{t-i}x₂^{i}` after `t` steps.
    pub fn intertwine_poly(&self, p: &Poly<R>) -> Result<Poly<R>> {
        let n = p.degree();
        let mut state = vec![p.clone()];
        for m in (1..=n).rev() {
            let h = self.resolvent(m)?;
            let t = state.len() - 1;
            let mut next = vec![Poly::zero(m - 1); t + 2];
            for (i, w_poly) in state.iter().enumerate() {
                let hw = h.apply(w_poly);
                next[i].add_assign_scaled(&hw.partial(0), Complex::one());
                next[i + 1].add_assign_scaled(&hw.partial(1), Complex::one());
            }
            state = next;
        }
        Ok(Poly::new(state.iter().map(|w| w.coeff(0)).collect()))
    }

    /// `V_k(p)(x) = Σ C(g₁,…,g_n) ∂_{g₁x}⋯∂_{g_nx} p` by enumerating all
    /// `|G|ⁿ` tuples, with `C(g₁,…,g_n) = C_n(g_n)C_{n−1}(g_n⁻¹g_{n−1})⋯C₁(g₂⁻¹g₁)`.
    /// Kept as an independent check of [`Self::intertwine`]; `n ≤ 3`.
    pub fn intertwine_naive(&self, p: &Poly<R>, x: [R; 2]) -> Result<Complex<R>> {
        let n = p.degree();
        if n > 3 {
            return Err(Error::Size { requested: (self.system.order() as u128).pow(n as u32), budget: 6u128.pow(3) * 8 });
        }
        if n == 0 {
            return Ok(p.coeff(0));
        }
        let tables: Vec<GroupAlgebraMap<Complex<R>>> =
            (1..=n).map(|m| coeffs::resolvent_coefficients(m, &self.system, &self.k)).collect::<Result<_>>()?;
        let elements: Vec<DihedralElement> = self.system.elements().collect();
        let mut total = Complex::zero();
        let mut tuple = vec![0usize; n];
        loop {
            let gs: Vec<DihedralElement> = tuple.iter().map(|&i| elements[i]).collect();
            let mut weight = *tables[n - 1].get(&gs[n - 1]);
            for j in (0..n - 1).rev() {
                // C_{j+1}(g_{j+2}⁻¹ g_{j+1})
                let h = gs[j + 1].inverse().compose_unchecked(&gs[j]);
                weight = weight * *tables[j].get(&h);
            }
            if !weight.is_zero() {
                let mut q = p.clone();
                for g in &gs {
                    q = q.directional_derivative(g.act(x));
                }
                total = total + weight * q.coeff(0);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(total);
                }
                tuple[pos] += 1;
                if tuple[pos] < elements.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    /// `η_k = h(T)[h] = Π_{α∈R₊} T_α h`.
    pub fn eta(&self) -> Result<Complex<R>> {
        let order: Vec<usize> = (0..self.roots.len()).collect();
        self.eta_in_order(&order)
    }

    /// `η_k` applying the root operators in the given order.
    pub fn eta_in_order(&self, order: &[usize]) -> Result<Complex<R>> {
        let mut p = alternating_poly::<R>(&self.system);
        for &j in order {
            p = self.apply_dunkl(self.roots[j].vector, &p)?;
        }
        p.as_constant().ok_or_else(|| Error::Consistency("h(T)[h] did not reduce to a constant".into()))
    }

    /// `E_n(·, y) = V_k(⟨·,y⟩ⁿ)/n!` as a polynomial in `x`.
    pub fn kernel_component(&self, n: usize, y: [R; 2]) -> Result<Poly<R>> {
        let v = self.intertwine_poly(&Poly::inner_power(y, n))?;
        Ok(v.scale_real(R::one() / factorial::<R>(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexMultiplicity, Dunkl, Matrix};

    fn ops(s: u32, k1: f64, k2: f64) -> Dunkl {
        let sys = DihedralSystem::new(s).unwrap();
        Dunkl::new(sys, ComplexMultiplicity::real(&sys, k1, k2).unwrap())
    }

    #[test]
    fn dunkl_operator_examples() {
        let d = ops(2, 0.7, 0.3);
        let x1 = Poly::from_real(&[1.0, 0.0]);
        let t = d.apply_dunkl([1.0, 0.0], &x1).unwrap();
        // (1,0) = α₁ is an odd-index root, so it carries k₂.
        assert!((t.coeff(0).re - (1.0 + 2.0 * 0.3)).abs() < 1e-15);
        let x2 = Poly::from_real(&[0.0, 1.0]);
        assert!(d.apply_dunkl([1.0, 0.0], &x2).unwrap().norm_max() < 1e-15);
    }

    #[test]
    fn element_a_examples() {
        let d = ops(4, 2.0, 3.0);
        let a = d.element_a();
        for g in d.system().elements() {
            let expected = match (g.is_reflection(), g.index() % 2) {
                (false, _) => 0.0,
                (true, 0) => 2.0,
                (true, _) => 3.0,
            };
            assert_eq!(a.get(&g).re, expected);
        }
    }

    #[test]
    fn matrix_examples() {
        let d = ops(4, 1.3, 1.3);
        assert!(d.a_matrix(1).norm_inf() < 1e-14);
        let unit = GroupAlgebraMap::unit(*d.system(), Complex::one());
        assert_eq!(d.matrix_of(5, &unit), Matrix::identity(5));
        let a0 = d.a_matrix(0);
        assert!((a0[(0, 0)] - d.gamma()).norm() < 1e-14);
    }

    #[test]
    fn resolvent_examples() {
        let k = 0.8;
        let d = ops(4, k, k);
        let h1 = d.resolvent_direct(1).unwrap();
        let expected = Matrix::identity(1).scale(re(1.0 / (1.0 + 4.0 * k)));
        assert!(h1.max_abs_diff(&expected) < 1e-15);
        let zero = ops(5, 0.0, 0.0);
        for n in 1..6 {
            let h = zero.resolvent_direct(n).unwrap();
            assert!(h.max_abs_diff(&Matrix::identity(n).scale(re(1.0 / n as f64))) < 1e-15);
            let series = zero.resolvent_series(n, 1e-14).unwrap();
            assert!(series.max_abs_diff(&h) < 1e-15);
        }
        let n = 4;
        let h = d.resolvent_direct(n).unwrap();
        let m = &Matrix::identity(n).scale(re(n as f64) + d.gamma()) - &d.a_matrix(n);
        assert!((&m * &h).max_abs_diff(&Matrix::identity(n)) < 1e-12);
        assert!(matches!(d.resolvent_direct(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn series_against_direct() {
        for (s, k1, k2, n) in [(4u32, 1.0, 1.0, 2usize), (3, 0.5, 0.5, 1), (6, 0.25, 1.5, 5)] {
            let d = ops(s, k1, k2);
            let direct = d.resolvent_direct(n).unwrap();
            let series = d.resolvent_series(n, 1e-12).unwrap();
            assert!(series.max_abs_diff(&direct) <= 1e-10, "s={s} n={n}");
        }
    }

    #[test]
    fn series_requires_condition() {
        let d = ops(4, -0.4, 0.05);
        assert!(matches!(d.resolvent_series(2, 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn singular_resolvent_is_reported() {
        // For s = 2, (1 + γ) − A₁ = diag(1 + 2k₂, 1 + 2k₁) in the monomial basis.
        let d = ops(2, -0.5, 0.3);
        assert!(matches!(d.resolvent_direct(1), Err(Error::Regularity { degree: 1, .. })));
        assert!(d.resolvent_direct(2).is_ok());
    }

    #[test]
    fn group_algebra_resolvent_examples() {
        let d = ops(4, 1.0, 1.0);
        let c = d.resolvent_as_group_algebra(1).unwrap();
        let sys = *d.system();
        assert!((c.get(&sys.reflection(1)).re - 1.0 / 9.0).abs() < 1e-15);
        assert!((c.get(&sys.rotation(1)).re - 4.0 / 45.0).abs() < 1e-15);
        assert!((c.get(&sys.identity()).re - 13.0 / 45.0).abs() < 1e-15);
        for n in 1..=6 {
            let m = d.matrix_of(n, &d.resolvent_as_group_algebra(n).unwrap());
            assert!(m.max_abs_diff(&d.resolvent_direct(n).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn intertwine_examples() {
        let d = ops(5, 0.6, 0.6);
        let x = [0.3, -0.8];
        assert_eq!(d.intertwine(&Poly::one(), x).unwrap(), Complex::one());
        let y = [1.1, 0.4];
        let v = d.intertwine(&Poly::inner_power(y, 1), x).unwrap();
        let expected = (x[0] * y[0] + x[1] * y[1]) / (1.0 + d.gamma().re);
        assert!((v.re - expected).abs() < 1e-14);
        let free = ops(4, 0.0, 0.0);
        let p = Poly::from_real(&[0.5, -1.0, 2.0, 3.0]);
        assert!((free.intertwine(&p, x).unwrap() - p.evaluate(x)).norm() < 1e-14);
    }

    #[test]
    fn intertwine_poly_matches_pointwise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let d = ops(4, 0.5, 1.25);
        for n in 0..=6 {
            let coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = Poly::from_real(&coeffs);
            let v = d.intertwine_poly(&p).unwrap();
            for _ in 0..100 {
                let x = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
                let direct = d.intertwine(&p, x).unwrap();
                assert!((v.evaluate(x) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn intertwine_matches_naive_tuple_sum() {
        let d = ops(4, 1.0, 1.0);
        let y = [0.7, -0.3];
        let p = Poly::inner_power(y, 2);
        for x in [[0.3, 0.5], [-1.0, 0.2], [0.9, 0.9]] {
            let naive = d.intertwine_naive(&p, x).unwrap();
            let fast = d.intertwine_poly(&p).unwrap().evaluate(x);
            assert!((naive - fast).norm() <= 1e-11);
        }
        assert!(matches!(d.intertwine_naive(&Poly::inner_power(y, 4), [1.0, 0.0]), Err(Error::Size { .. })));
    }

    #[test]
    fn eta_for_zero_multiplicity_is_the_fischer_pairing() {
        for s in [2u32, 3, 4, 5, 6] {
            let d = ops(s, 0.0, 0.0);
            let h = alternating_poly::<f64>(d.system());
            // h(∂)h = Σ_a a!(s−a)! |c_a|²
            let n = h.degree();
            let oracle: f64 = (0..=n)
                .map(|i| factorial::<f64>(n - i) * factorial::<f64>(i) * h.coeff(i).norm_sqr())
                .sum();
            let eta = d.eta().unwrap();
            assert!((eta.re - oracle).abs() <= 1e-10 * oracle, "s={s}");
        }
    }

    #[test]
    fn eta_is_order_independent() {
        let d = ops(6, 0.5, 1.5);
        let forward = d.eta().unwrap();
        let reversed = d.eta_in_order(&[5, 4, 3, 2, 1, 0]).unwrap();
        let shuffled = d.eta_in_order(&[2, 0, 5, 1, 4, 3]).unwrap();
        assert!((forward - reversed).norm() <= 1e-10 * forward.norm());
        assert!((forward - shuffled).norm() <= 1e-10 * forward.norm());
    }
}
