//! The Dunkl kernel `E_k(x,y) = Σ_n E_n(x,y)`, its homogeneous components
//! `E_n(·,y) = V_k(⟨·,y⟩ⁿ)/n!`, the generalized Bessel function
//! `E_k^G(x,y) = |G|⁻¹ Σ_g E_k(gx,y)` and the alternating polynomial `h`.

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::algebra::GroupAlgebraMap;
use crate::coeffs;
use crate::error::{Error, Result};
use crate::group::{DihedralElement, DihedralSystem};
use crate::operator::DunklOperators;
use crate::poly::HomogeneousPolynomial;
use crate::scalar::{factorial, lit, re, Real};

/// Hard cap on the truncation degree of kernel sums.
pub const MAX_DEGREE_CAP: usize = 60;

/// Number of consecutive small terms required before a sum is truncated.
const SMALL_TERMS: usize = 3;

type Poly<R> = HomogeneousPolynomial<R>;

/// `h(x) = Π_{α∈R₊} ⟨α, x⟩`, homogeneous of degree `s`.
pub fn alternating_poly<R: Real>(sys: &DihedralSystem) -> Poly<R> {
    sys.positive_roots::<R>()
        .iter()
        .fold(Poly::one(), |acc, root| &acc * &Poly::linear([re(root.vector[0]), re(root.vector[1])]))
}

/// Homogeneous components `E_0(·,y), …, E_N(·,y)`.
#[derive(Clone, Debug)]
pub struct GradedKernel<R> {
    pub y: [R; 2],
    pub components: Vec<HomogeneousPolynomial<R>>,
    /// `(|x||y|)^{N+1}/(N+1)!` at unit `|x|`, the classical exponential tail.
    pub tail_estimate: R,
}

impl<R: Real> GradedKernel<R> {
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

/// A truncated series value together with its truncation report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue<R> {
    pub value: Complex<R>,
    /// Highest degree included in the sum.
    pub n_used: usize,
    /// `(|x||y|)^{N+1}/(N+1)!`.
    pub tail_estimate: R,
    /// Modulus of the last summed term.
    pub last_term: R,
    pub converged: bool,
}

impl<R: Real> KernelValue<R> {
    /// Turns a non-converged value into [`Error::Convergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Convergence(format!(
                "no convergence up to degree {}; last term magnitude {:e}",
                self.n_used,
                self.last_term.to_f64().unwrap_or(f64::NAN)
            )))
        }
    }
}

fn norm2<R: Real>(v: [R; 2]) -> R {
    v[0].hypot(v[1])
}

fn tail_proxy<R: Real>(xy: R, n: usize) -> R {
    xy.powi(n as i32 + 1) / factorial::<R>(n + 1)
}

/// Sums `term(0), term(1), …` until `SMALL_TERMS` consecutive terms fall below
/// `tol·|partial sum|` or `max_degree` is reached.
fn adaptive_sum<R: Real, F>(mut term: F, tol: R, max_degree: usize, xy: R) -> Result<KernelValue<R>>
where
    F: FnMut(usize) -> Result<Complex<R>>,
{
    let max_degree = max_degree.min(MAX_DEGREE_CAP);
    let mut sum = Complex::zero();
    let mut small = 0;
    let mut last = R::zero();
    for n in 0..=max_degree {
        let t = term(n)?;
        sum = sum + t;
        last = t.norm();
        if last <= tol * sum.norm() {
            small += 1;
            if small >= SMALL_TERMS {
                return Ok(KernelValue { value: sum, n_used: n, tail_estimate: tail_proxy(xy, n), last_term: last, converged: true });
            }
        } else {
            small = 0;
        }
    }
    Ok(KernelValue {
        value: sum,
        n_used: max_degree,
        tail_estimate: tail_proxy(xy, max_degree),
        last_term: last,
        converged: false,
    })
}

fn pair<R: Real>(a: [R; 2], b: [R; 2]) -> R {
    a[0] * b[0] + a[1] * b[1]
}

/// Visits every `n`-tuple of indices in `0..base`, first index fastest.
fn for_each_tuple<F: FnMut(&[usize])>(n: usize, base: usize, mut f: F) {
    let mut tuple = vec![0usize; n];
    loop {
        f(&tuple);
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            tuple[pos] += 1;
            if tuple[pos] < base {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// Largest `n` accepted by the tuple-enumeration oracles.
pub const NAIVE_MAX_DEGREE: usize = 3;

impl<R: Real> DunklOperators<R> {
    /// `E_n(·, y)` as a polynomial in `x`.
    pub fn e_n(&self, n: usize, y: [R; 2]) -> Result<Poly<R>> {
        self.kernel_component(n, y)
    }

    /// `E_n(x,y) = Σ_{g₁…g_n} C(g₁,…,g_n) Π_j ⟨g_j x, y⟩` by enumerating all
    /// `|G|ⁿ` tuples. Test oracle; `n ≤ 3`.
    pub fn e_n_naive(&self, n: usize, x: [R; 2], y: [R; 2]) -> Result<Complex<R>> {
        if n > NAIVE_MAX_DEGREE {
            return Err(Error::Size {
                requested: (self.system().order() as u128).pow(n as u32),
                budget: (self.system().order() as u128).pow(NAIVE_MAX_DEGREE as u32),
            });
        }
        if n == 0 {
            return Ok(Complex::one());
        }
        let sys = self.system();
        let tables = self.coefficient_tables(n)?;
        let elements: Vec<DihedralElement> = sys.elements().collect();
        let pairings: Vec<R> = elements.iter().map(|g| pair(g.act(x), y)).collect();
        let mut total = Complex::zero();
        for_each_tuple(n, elements.len(), |t| {
            let mut weight = *tables[n - 1].get(&elements[t[n - 1]]);
            for j in (0..n - 1).rev() {
                let h = elements[t[j + 1]].inverse().compose_unchecked(&elements[t[j]]);
                weight = weight * *tables[j].get(&h);
            }
            let prod = t.iter().fold(R::one(), |acc, &i| acc * pairings[i]);
            total = total + weight.scale(prod);
        });
        Ok(total)
    }

    /// Degree-`n` term of `E_k^G(x,y)` from the tuple formula
    /// `|G|⁻¹ n⁻¹ Σ C_{n−1}(g_n⁻¹g_{n−1})⋯C₁(g₂⁻¹g₁) Π_j ⟨g_j x, y⟩`. Test
    /// oracle; `n ≤ 3`.
    pub fn bessel_term_naive(&self, n: usize, x: [R; 2], y: [R; 2]) -> Result<Complex<R>> {
        if n > NAIVE_MAX_DEGREE {
            return Err(Error::Size {
                requested: (self.system().order() as u128).pow(n as u32),
                budget: (self.system().order() as u128).pow(NAIVE_MAX_DEGREE as u32),
            });
        }
        if n == 0 {
            return Ok(Complex::one());
        }
        let sys = self.system();
        let tables = self.coefficient_tables(n.saturating_sub(1))?;
        let elements: Vec<DihedralElement> = sys.elements().collect();
        let pairings: Vec<R> = elements.iter().map(|g| pair(g.act(x), y)).collect();
        let mut total = Complex::zero();
        for_each_tuple(n, elements.len(), |t| {
            let mut weight = Complex::<R>::one();
            for j in (0..n - 1).rev() {
                let h = elements[t[j + 1]].inverse().compose_unchecked(&elements[t[j]]);
                weight = weight * *tables[j].get(&h);
            }
            let prod = t.iter().fold(R::one(), |acc, &i| acc * pairings[i]);
            total = total + weight.scale(prod);
        });
        let norm = lit::<R>(sys.order() as f64) * lit::<R>(n as f64);
        Ok(total.unscale(norm))
    }

    fn coefficient_tables(&self, n: usize) -> Result<Vec<GroupAlgebraMap<Complex<R>>>> {
        (1..=n).map(|m| coeffs::resolvent_coefficients(m, self.system(), self.multiplicity())).collect()
    }

    /// `E_0(·,y), …, E_N(·,y)`.
    pub fn graded_kernel(&self, y: [R; 2], max_degree: usize) -> Result<GradedKernel<R>> {
        let components = (0..=max_degree).map(|n| self.e_n(n, y)).collect::<Result<Vec<_>>>()?;
        Ok(GradedKernel { y, components, tail_estimate: tail_proxy(norm2(y), max_degree) })
    }

    /// Homogeneous components of `E_k^G(·, y)`.
    pub fn graded_bessel(&self, y: [R; 2], max_degree: usize) -> Result<GradedKernel<R>> {
        let components = (0..=max_degree).map(|n| self.bessel_component(n, y)).collect::<Result<Vec<_>>>()?;
        Ok(GradedKernel { y, components, tail_estimate: tail_proxy(norm2(y), max_degree) })
    }

    /// `|G|⁻¹ Σ_g E_n(g·, y)`.
    pub fn bessel_component(&self, n: usize, y: [R; 2]) -> Result<Poly<R>> {
        let e = self.e_n(n, y)?;
        Ok(group_average(&e, self.system()))
    }

    /// `E_k(x, y)`, truncated adaptively at relative tolerance `tol`.
    pub fn dunkl_kernel(&self, x: [R; 2], y: [R; 2], tol: R, max_degree: usize) -> Result<KernelValue<R>> {
        let p_scale = |n: usize| R::one() / factorial::<R>(n);
        adaptive_sum(
            |n| Ok(self.intertwine(&Poly::inner_power(y, n), x)?.scale(p_scale(n))),
            tol,
            max_degree,
            norm2(x) * norm2(y),
        )
    }

    /// `E_k^G(x, y)`, from group-averaged homogeneous components.
    pub fn generalized_bessel(&self, x: [R; 2], y: [R; 2], tol: R, max_degree: usize) -> Result<KernelValue<R>> {
        adaptive_sum(|n| Ok(self.bessel_component(n, y)?.evaluate(x)), tol, max_degree, norm2(x) * norm2(y))
    }
}

/// `|G|⁻¹ Σ_g (p∘g)`.
pub fn group_average<R: Real>(p: &Poly<R>, sys: &DihedralSystem) -> Poly<R> {
    let mut acc = Poly::zero(p.degree());
    for g in sys.elements() {
        acc.add_assign_scaled(&p.group_action(&g), Complex::one());
    }
    acc.scale_real(R::one() / lit::<R>(sys.order() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexMultiplicity, Dunkl, Poly};

    fn ops(s: u32, k1: f64, k2: f64) -> Dunkl {
        let sys = DihedralSystem::new(s).unwrap();
        Dunkl::new(sys, ComplexMultiplicity::real(&sys, k1, k2).unwrap())
    }

    #[test]
    fn alternating_poly_examples() {
        let sys = DihedralSystem::new(4).unwrap();
        let h = alternating_poly::<f64>(&sys);
        // (1/2)x₁x₂(x₁² − x₂²) = (1/2)x₁³x₂ − (1/2)x₁x₂³
        let expected = Poly::from_real(&[0.0, 0.5, 0.0, -0.5, 0.0]);
        assert!(h.abs_diff(&expected) < 1e-15);
        assert!(h.evaluate([1.0, 0.0]).norm() < 1e-15);
        for s in 2..=7u32 {
            let sys = DihedralSystem::new(s).unwrap();
            let h = alternating_poly::<f64>(&sys);
            for g in sys.elements() {
                for x in [[0.3, 0.9], [-1.2, 0.4]] {
                    let lhs = h.evaluate(g.act(x));
                    let rhs = h.evaluate(x).scale(g.det() as f64);
                    assert!((lhs - rhs).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn component_examples() {
        let d = ops(6, 0.75, 0.75);
        let y = [0.4, -1.1];
        assert_eq!(d.e_n(0, y).unwrap(), Poly::one());
        let e1 = d.e_n(1, y).unwrap();
        let expected = Poly::inner_power(y, 1).scale_real(1.0 / (1.0 + d.gamma().re));
        assert!(e1.rel_diff(&expected) < 1e-14);
        let free = ops(4, 0.0, 0.0);
        for n in 0..8 {
            let e = free.e_n(n, y).unwrap();
            let taylor = Poly::inner_power(y, n).scale_real(1.0 / factorial::<f64>(n));
            assert!(e.abs_diff(&taylor) <= 1e-12);
        }
    }

    #[test]
    fn naive_components_match_iterative() {
        let d = ops(4, 1.0, 1.0);
        let (x, y) = ([0.3, 0.5], [1.0, -0.2]);
        for n in 0..=3 {
            let naive = d.e_n_naive(n, x, y).unwrap();
            let fast = d.e_n(n, y).unwrap().evaluate(x);
            assert!((naive - fast).norm() <= 1e-10, "n={n}");
        }
        let e1 = d.e_n_naive(1, x, y).unwrap();
        assert!((e1.re - pair(x, y) / 5.0).abs() < 1e-14);
        assert!(d.e_n_naive(4, x, y).is_err());
    }

    #[test]
    fn naive_components_for_zero_multiplicity() {
        let d = ops(3, 0.0, 0.0);
        let (x, y) = ([0.3, 0.5], [1.0, -0.2]);
        for n in 1..=3 {
            let naive = d.e_n_naive(n, x, y).unwrap();
            assert!((naive.re - pair(x, y).powi(n as i32) / factorial::<f64>(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_examples() {
        let d = ops(4, 1.0, 1.0);
        let at_zero = d.dunkl_kernel([0.3, 0.5], [0.0, 0.0], 1e-12, 40).unwrap();
        assert!(at_zero.converged);
        assert_eq!(at_zero.value, Complex::one());
        let free = ops(5, 0.0, 0.0);
        for (x, y) in [([1.0, 0.0], [1.0, 0.0]), ([0.7, -1.2], [1.5, 0.9]), ([-1.0, 1.0], [1.2, 2.0])] {
            let v = free.dunkl_kernel(x, y, 1e-14, 60).unwrap();
            let exact = pair(x, y).exp();
            assert!((v.value.re - exact).abs() <= 1e-10 * exact, "{x:?} {y:?}");
        }
        let (x, y) = ([0.3, 0.5], [1.0, -0.2]);
        let a = d.dunkl_kernel(x, y, 1e-14, 20).unwrap();
        let b = d.dunkl_kernel(x, y, 1e-14, 25).unwrap();
        assert!((a.value - b.value).norm() <= 1e-10);
    }

    #[test]
    fn non_convergence_is_reported() {
        let d = ops(4, 0.5, 0.5);
        let v = d.dunkl_kernel([3.0, 1.0], [4.0, -2.0], 1e-15, 5).unwrap();
        assert!(!v.converged);
        assert!(matches!(v.require_converged(), Err(Error::Convergence(_))));
    }

    #[test]
    fn bessel_examples() {
        let d = ops(4, 1.0, 0.5);
        let y = [0.9, -0.4];
        assert!(d.bessel_component(1, y).unwrap().is_zero_within(1e-15));
        let x = [0.6, 0.2];
        let base = d.generalized_bessel(x, y, 1e-13, 40).unwrap().value;
        for g in d.system().elements() {
            let moved = d.generalized_bessel(g.act(x), y, 1e-13, 40).unwrap().value;
            assert!((moved - base).norm() <= 1e-11 * base.norm());
        }
        for n in 0..=3 {
            let naive = d.bessel_term_naive(n, x, y).unwrap();
            let graded = d.bessel_component(n, y).unwrap().evaluate(x);
            assert!((naive - graded).norm() <= 1e-10, "n={n}");
        }
    }

    trait NearZero {
        fn is_zero_within(&self, tol: f64) -> bool;
    }

    impl NearZero for Poly {
        fn is_zero_within(&self, tol: f64) -> bool {
            self.norm_max() <= tol
        }
    }
}
