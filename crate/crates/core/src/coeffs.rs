//! Weighted reflection-factorization counts `c_m(g)` and the resolvent
//! coefficients `C_n(g)`.
//!
//! `c_m(g)` sums `k(α_{i₁})⋯k(α_{i_m})` over ordered `m`-tuples of positive
//! roots whose reflections multiply to `g`; `c₀ = δ_{ge}`. They are computed
//! three ways (enumeration, the one-step recursion, closed forms) in exact
//! arithmetic. `C_n(g) = Σ_m c_m(g)/(n+γ)^{m+1}` is analytic and uses the
//! geometric structure of the closed forms.

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::algebra::GroupAlgebraMap;
use crate::error::{Error, Result};
use crate::group::{DihedralElement, DihedralSystem, ElementKind, FactorClass, Multiplicity};
use crate::scalar::{lit, pow, re, Real, Ring};

/// Upper bound on the number of tuples [`c_bruteforce`] will enumerate.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// `c_m(g)` by enumerating all `s^m` tuples of positive roots.
pub fn c_bruteforce<T: Ring>(m: usize, g: &DihedralElement, sys: &DihedralSystem, k: &Multiplicity<T>) -> Result<T> {
    let requested = (sys.s() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if requested > ENUMERATION_BUDGET {
        return Err(Error::Size { requested, budget: ENUMERATION_BUDGET });
    }
    let reflections: Vec<(DihedralElement, T)> = (1..=sys.s())
        .map(|j| {
            let r = sys.reflection(j as i64);
            let w = k.on_element(&r);
            (r, w)
        })
        .collect();

    fn walk<T: Ring>(
        depth: usize,
        prod: DihedralElement,
        weight: T,
        target: &DihedralElement,
        reflections: &[(DihedralElement, T)],
        acc: &mut T,
    ) {
        if depth == 0 {
            if prod == *target {
                *acc = acc.clone() + weight;
            }
            return;
        }
        for (r, w) in reflections {
            walk(depth - 1, prod.compose_unchecked(r), weight.clone() * w.clone(), target, reflections, acc);
        }
    }

    let mut acc = T::zero();
    walk(m, sys.identity(), T::one(), g, &reflections, &mut acc);
    Ok(acc)
}

/// `c_m(g)` through `c_{m+1}(g) = Σ_α k(α) c_m(σ_α g)`.
pub fn c_recursion<T: Ring>(m: usize, g: &DihedralElement, sys: &DihedralSystem, k: &Multiplicity<T>) -> T {
    CoeffTable::by_recursion(*sys, k.clone(), m).get(m, g).clone()
}

/// Closed forms. Constant multiplicity: `kᵐ|R₊|^{m-1}` when the parity of `m`
/// matches the kind of `g` and zero otherwise. Two orbits (`s = 2q`):
/// `q^{m-1}/2·[(k₁+k₂)ᵐ ± (k₁−k₂)ᵐ]` with the sign given by
/// [`DihedralElement::classify`].
pub fn c_closed<T: Ring>(m: usize, g: &DihedralElement, sys: &DihedralSystem, k: &Multiplicity<T>) -> Result<T> {
    if !sys.is_even() && !k.is_constant() {
        return Err(Error::Validation(format!("odd s = {} requires k1 = k2", sys.s())));
    }
    if m == 0 {
        return Ok(if g.is_identity() { T::one() } else { T::zero() });
    }
    let m_odd = m % 2 == 1;
    let parity_ok = match g.kind() {
        ElementKind::Reflection => m_odd,
        ElementKind::Rotation => !m_odd,
    };
    if !parity_ok {
        return Ok(T::zero());
    }
    match sys.half() {
        None => {
            let s = T::from_u32_lossless(sys.s());
            Ok(pow(k.k1(), m) * pow(&s, m - 1))
        }
        Some(q) => {
            let q = T::from_u32_lossless(q);
            let two = T::one() + T::one();
            let sum = pow(&(k.k1().clone() + k.k2().clone()), m);
            let diff = pow(&(k.k1().clone() - k.k2().clone()), m);
            let bracket = match g.classify(m_odd)? {
                FactorClass::Plus => sum + diff,
                FactorClass::Minus => sum - diff,
                FactorClass::Excluded => unreachable!("parity checked above"),
            };
            Ok(pow(&q, m - 1) * bracket / two)
        }
    }
}

trait FromU32: Sized {
    fn from_u32_lossless(v: u32) -> Self;
}

impl<T: Ring> FromU32 for T {
    fn from_u32_lossless(v: u32) -> Self {
        (0..v).fold(T::zero(), |acc, _| acc + T::one())
    }
}

/// Exact table of `c_m(g)` for `m ≤ m_max` and all `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable<T> {
    system: DihedralSystem,
    k: Multiplicity<T>,
    table: Vec<GroupAlgebraMap<T>>,
}

impl<T: Ring> CoeffTable<T> {
    /// Left recursion `c_{m+1}(g) = Σ_α k(α) c_m(σ_α g)`.
    pub fn by_recursion(system: DihedralSystem, k: Multiplicity<T>, m_max: usize) -> Self {
        Self::build(system, k, m_max, false)
    }

    /// Right-multiplied variant `c_{m+1}(g) = Σ_α k(α) c_m(g σ_α)`.
    pub fn by_right_recursion(system: DihedralSystem, k: Multiplicity<T>, m_max: usize) -> Self {
        Self::build(system, k, m_max, true)
    }

    fn build(system: DihedralSystem, k: Multiplicity<T>, m_max: usize, right: bool) -> Self {
        let reflections: Vec<DihedralElement> = (1..=system.s()).map(|j| system.reflection(j as i64)).collect();
        let mut table = vec![GroupAlgebraMap::unit(system, T::one())];
        for m in 0..m_max {
            let prev = &table[m];
            let next = GroupAlgebraMap::from_fn(system, |g| {
                reflections.iter().fold(T::zero(), |acc, r| {
                    let h = if right { g.compose_unchecked(r) } else { r.compose_unchecked(g) };
                    acc + k.on_element(r) * prev.get(&h).clone()
                })
            });
            table.push(next);
        }
        Self { system, k, table }
    }

    pub fn by_bruteforce(system: DihedralSystem, k: Multiplicity<T>, m_max: usize) -> Result<Self> {
        let table = (0..=m_max)
            .map(|m| {
                let values: Result<Vec<T>> = system.elements().map(|g| c_bruteforce(m, &g, &system, &k)).collect();
                values.map(|v| GroupAlgebraMap::from_fn(system, |g| v[g.ordinal()].clone()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { system, k, table })
    }

    pub fn by_closed_form(system: DihedralSystem, k: Multiplicity<T>, m_max: usize) -> Result<Self> {
        let table = (0..=m_max)
            .map(|m| {
                let values: Result<Vec<T>> = system.elements().map(|g| c_closed(m, &g, &system, &k)).collect();
                values.map(|v| GroupAlgebraMap::from_fn(system, |g| v[g.ordinal()].clone()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { system, k, table })
    }

    pub fn system(&self) -> &DihedralSystem {
        &self.system
    }

    pub fn multiplicity(&self) -> &Multiplicity<T> {
        &self.k
    }

    pub fn m_max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, m: usize, g: &DihedralElement) -> &T {
        self.table[m].get(g)
    }

    /// `c_m` as an element of the group algebra, i.e. `Aᵐ = Σ_g c_m(g) g`.
    pub fn row(&self, m: usize) -> &GroupAlgebraMap<T> {
        &self.table[m]
    }
}

/// How [`resolvent_coefficient`] evaluates `C_n(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    /// Exact geometric summation of the closed-form `c_m`.
    Series,
    /// The printed closed expressions for a constant multiplicity
    /// (identity handled by the value the series produces).
    Closed,
}

/// `C_n(g) = Σ_{m≥0} c_m(g)/(n+γ)^{m+1}`.
pub fn resolvent_coefficient<R: Real>(
    n: usize,
    g: &DihedralElement,
    sys: &DihedralSystem,
    k: &Multiplicity<Complex<R>>,
    mode: SumMode,
) -> Result<Complex<R>> {
    if n == 0 {
        return Err(Error::Precondition("C_n is defined for n >= 1".into()));
    }
    if !sys.is_even() && !k.is_constant() {
        return Err(Error::Validation(format!("odd s = {} requires k1 = k2", sys.s())));
    }
    let gamma = k.gamma(sys);
    let z = re(lit::<R>(n as f64)) + gamma;
    match mode {
        SumMode::Series => series_coefficient(g, sys, k, z),
        SumMode::Closed => {
            if !k.is_constant() {
                return Err(Error::Validation("closed C_n expressions need a constant multiplicity".into()));
            }
            check_ratio(gamma, z)?;
            let nn = re(lit::<R>(n as f64));
            let roots = re(lit::<R>(sys.s() as f64));
            let two_gamma = gamma + gamma;
            let rotation = gamma * gamma / (nn * roots * z * (nn + two_gamma));
            Ok(match g.kind() {
                ElementKind::Reflection => gamma / (nn * roots * (nn + two_gamma)),
                ElementKind::Rotation if g.is_identity() => Complex::<R>::one() / z + rotation,
                ElementKind::Rotation => rotation,
            })
        }
    }
}

/// The identity coefficient exactly as printed: `(n+γ)/(n|R₊|(n+2γ))`.
/// Only kept to report its residual against [`resolvent_coefficient`].
pub fn printed_identity_coefficient<R: Real>(n: usize, sys: &DihedralSystem, k: &Multiplicity<Complex<R>>) -> Complex<R> {
    let gamma = k.gamma(sys);
    let nn = re(lit::<R>(n as f64));
    let roots = re(lit::<R>(sys.s() as f64));
    (nn + gamma) / (nn * roots * (nn + gamma + gamma))
}

/// `g ↦ C_n(g)` for all group elements.
pub fn resolvent_coefficients<R: Real>(
    n: usize,
    sys: &DihedralSystem,
    k: &Multiplicity<Complex<R>>,
) -> Result<GroupAlgebraMap<Complex<R>>> {
    let values = sys
        .elements()
        .map(|g| resolvent_coefficient(n, &g, sys, k, SumMode::Series))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupAlgebraMap::from_fn(*sys, |g| values[g.ordinal()]))
}

fn check_ratio<R: Real>(t: Complex<R>, z: Complex<R>) -> Result<()> {
    let ratio = t.norm() / z.norm();
    if ratio >= R::one() || !ratio.is_finite() {
        return Err(Error::Convergence(format!(
            "geometric ratio |{}|/|n+gamma| = {} is not below 1",
            t,
            ratio.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// `Σ_{m ≥ 1, m ≡ parity} Q^{m-1} tᵐ / z^{m+1}` in closed form.
fn geometric_tail<R: Real>(t: Complex<R>, big_q: Complex<R>, z: Complex<R>, odd: bool) -> Result<Complex<R>> {
    check_ratio(big_q * t, z)?;
    let rho = big_q * t / z;
    let denom = Complex::<R>::one() - rho * rho;
    let head = if odd { rho } else { rho * rho };
    Ok(head / denom / (big_q * z))
}

fn series_coefficient<R: Real>(
    g: &DihedralElement,
    sys: &DihedralSystem,
    k: &Multiplicity<Complex<R>>,
    z: Complex<R>,
) -> Result<Complex<R>> {
    let odd = g.is_reflection();
    let constant_part = if g.is_identity() { Complex::<R>::one() / z } else { Complex::zero() };
    let tail = match sys.half() {
        None => {
            let s = re(lit::<R>(sys.s() as f64));
            geometric_tail(*k.k1(), s, z, odd)?
        }
        Some(q) => {
            let q = re(lit::<R>(q as f64));
            let sum = geometric_tail(*k.k1() + *k.k2(), q, z, odd)?;
            let diff = geometric_tail(*k.k1() - *k.k2(), q, z, odd)?;
            let half = re(lit::<R>(0.5));
            match g.classify(odd)? {
                FactorClass::Plus => (sum + diff) * half,
                FactorClass::Minus => (sum - diff) * half,
                FactorClass::Excluded => unreachable!("parity matches kind by construction"),
            }
        }
    };
    Ok(constant_part + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact(sys: &DihedralSystem, k1: Rational, k2: Rational) -> Multiplicity<Rational> {
        Multiplicity::new(sys, k1, k2).unwrap()
    }

    #[test]
    fn c_zero_is_delta() {
        let sys = DihedralSystem::new(4).unwrap();
        let k = exact(&sys, q(1, 1), q(2, 1));
        for g in sys.elements() {
            let expected = if g.is_identity() { q(1, 1) } else { q(0, 1) };
            assert_eq!(c_bruteforce(0, &g, &sys, &k).unwrap(), expected);
            assert_eq!(c_recursion(0, &g, &sys, &k), expected);
        }
    }

    #[test]
    fn bruteforce_examples() {
        let sys = DihedralSystem::new(4).unwrap();
        let ones = exact(&sys, q(1, 1), q(1, 1));
        for g in sys.elements().filter(|g| !g.is_reflection()) {
            assert_eq!(c_bruteforce(2, &g, &sys, &ones).unwrap(), q(4, 1));
        }
        let k = exact(&sys, q(1, 1), q(2, 1));
        assert_eq!(c_bruteforce(2, &sys.rotation(2), &sys, &k).unwrap(), q(10, 1));
        assert_eq!(c_closed(2, &sys.rotation(2), &sys, &k).unwrap(), q(10, 1));
    }

    #[test]
    fn bruteforce_budget() {
        let sys = DihedralSystem::new(6).unwrap();
        let k = Multiplicity::constant(1i64);
        assert!(matches!(c_bruteforce(10, &sys.identity(), &sys, &k), Err(Error::Size { .. })));
    }

    #[test]
    fn first_order_values() {
        let sys = DihedralSystem::new(6).unwrap();
        let k = exact(&sys, q(3, 2), q(1, 2));
        for j in 0..6 {
            let g = sys.reflection(j);
            let expected = if j % 2 == 0 { q(3, 2) } else { q(1, 2) };
            assert_eq!(c_recursion(1, &g, &sys, &k), expected);
        }
    }

    #[test]
    fn left_and_right_recursions_agree() {
        let sys = DihedralSystem::new(6).unwrap();
        let k = exact(&sys, q(1, 1), q(2, 1));
        let left = CoeffTable::by_recursion(sys, k.clone(), 6);
        let right = CoeffTable::by_right_recursion(sys, k, 6);
        assert_eq!(left, right);
    }

    #[test]
    fn closed_form_examples() {
        let sys = DihedralSystem::new(4).unwrap();
        let ones = exact(&sys, q(1, 1), q(1, 1));
        assert_eq!(c_closed(3, &sys.reflection(1), &sys, &ones).unwrap(), q(16, 1));
        assert_eq!(c_closed(2, &sys.reflection(1), &sys, &ones).unwrap(), q(0, 1));
        let odd = DihedralSystem::new(3).unwrap();
        // built against an even system, then misused on an odd one
        let unequal = exact(&sys, q(1, 1), q(2, 1));
        assert!(matches!(c_closed(1, &odd.reflection(1), &odd, &unequal), Err(Error::Validation(_))));
    }

    #[test]
    fn two_orbit_formula_collapses_to_constant_formula() {
        for s in [2u32, 4, 6, 8] {
            let sys = DihedralSystem::new(s).unwrap();
            for kv in [q(1, 1), q(3, 2), q(-2, 5)] {
                let k = exact(&sys, kv.clone(), kv.clone());
                for m in 1..=6 {
                    for g in sys.elements() {
                        let parity_ok = g.is_reflection() == (m % 2 == 1);
                        let expected = if parity_ok {
                            pow(&kv, m) * pow(&q(s as i64, 1), m - 1)
                        } else {
                            q(0, 1)
                        };
                        assert_eq!(c_closed(m, &g, &sys, &k).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn resolvent_coefficient_examples() {
        let sys = DihedralSystem::new(4).unwrap();
        let k = Multiplicity::<Complex<f64>>::real(&sys, 1.0, 1.0).unwrap();
        for mode in [SumMode::Series, SumMode::Closed] {
            let refl = resolvent_coefficient(1, &sys.reflection(1), &sys, &k, mode).unwrap();
            let rot = resolvent_coefficient(1, &sys.rotation(1), &sys, &k, mode).unwrap();
            let id = resolvent_coefficient(1, &sys.identity(), &sys, &k, mode).unwrap();
            assert!((refl.re - 1.0 / 9.0).abs() < 1e-15);
            assert!((rot.re - 4.0 / 45.0).abs() < 1e-15);
            assert!((id.re - 13.0 / 45.0).abs() < 1e-15);
        }
        let total = resolvent_coefficients(1, &sys, &k).unwrap().sum();
        assert!((total.re - 1.0).abs() < 1e-14);
        let printed = printed_identity_coefficient(1, &sys, &k);
        assert!((printed.re - 5.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_condition_is_enforced() {
        let sys = DihedralSystem::new(4).unwrap();
        // γ = -0.9·2·... with n+γ small relative to q(k1+k2)
        let k = Multiplicity::<Complex<f64>>::real(&sys, -0.2, -0.2).unwrap();
        let err = resolvent_coefficient(1, &sys.identity(), &sys, &k, SumMode::Series).unwrap_err();
        assert!(matches!(err, Error::Convergence(_)));
        assert!(resolvent_coefficient(0, &sys.identity(), &sys, &k, SumMode::Series).is_err());
    }
}
