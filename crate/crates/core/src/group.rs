//! The dihedral group D₂(s), its root system I₂(s) and multiplicity functions.
//!
//! Group elements are symbolic: a kind and an index modulo `s`. Writing
//! `ω = e^{2iπ/s}` and identifying the plane with ℂ,
//!
//! * the rotation `r_j` is `z ↦ z·ωʲ`,
//! * the reflection `σ_j` is `z ↦ z̄·ωʲ`.
//!
//! All composition is integer arithmetic; 2×2 matrices are only produced on
//! demand for geometry.

use std::fmt;

use num::complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Rotation,
    Reflection,
}

/// An element of D₂(s). The identity is `r_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralElement {
    s: u32,
    kind: ElementKind,
    index: u32,
}

/// Orbit label. For even `s` reflections split into 𝒪₀ (even index) and 𝒪₁
/// (odd index); rotations split into 𝒪₂ (even index, containing the
/// identity) and 𝒪₃ (odd index). For odd `s` all reflections share 𝒪₀ and
/// all rotations 𝒪₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orbit {
    O0,
    O1,
    O2,
    O3,
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Orbit::O0 => "O0",
            Orbit::O1 => "O1",
            Orbit::O2 => "O2",
            Orbit::O3 => "O3",
        };
        f.write_str(s)
    }
}

/// Label of an element relative to the parity of a factorization length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorClass {
    Plus,
    Minus,
    Excluded,
}

impl DihedralElement {
    pub fn rotation(s: u32, index: i64) -> Self {
        Self { s, kind: ElementKind::Rotation, index: wrap(index, s) }
    }

    pub fn reflection(s: u32, index: i64) -> Self {
        Self { s, kind: ElementKind::Reflection, index: wrap(index, s) }
    }

    pub fn identity(s: u32) -> Self {
        Self::rotation(s, 0)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_identity(&self) -> bool {
        self.kind == ElementKind::Rotation && self.index == 0
    }

    pub fn is_reflection(&self) -> bool {
        self.kind == ElementKind::Reflection
    }

    /// Position in the fixed enumeration order: rotations `r_0..r_{s-1}`
    /// followed by reflections `σ_0..σ_{s-1}`.
    pub fn ordinal(&self) -> usize {
        match self.kind {
            ElementKind::Rotation => self.index as usize,
            ElementKind::Reflection => (self.s + self.index) as usize,
        }
    }

    pub fn det(&self) -> i32 {
        match self.kind {
            ElementKind::Rotation => 1,
            ElementKind::Reflection => -1,
        }
    }

    pub fn inverse(&self) -> Self {
        match self.kind {
            ElementKind::Rotation => Self::rotation(self.s, -(self.index as i64)),
            ElementKind::Reflection => *self,
        }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.s != other.s {
            return Err(Error::Validation(format!(
                "cannot compose elements of D2({}) and D2({})",
                self.s, other.s
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let (j, l) = (self.index as i64, other.index as i64);
        let s = self.s;
        use ElementKind::*;
        match (self.kind, other.kind) {
            (Rotation, Rotation) => Self::rotation(s, j + l),
            (Rotation, Reflection) => Self::reflection(s, l + j),
            (Reflection, Rotation) => Self::reflection(s, j - l),
            (Reflection, Reflection) => Self::rotation(s, j - l),
        }
    }

    /// `w ∘ g ∘ w⁻¹`.
    pub fn conjugate(w: &Self, g: &Self) -> Result<Self> {
        w.compose(g)?.compose(&w.inverse())
    }

    pub fn orbit(&self) -> Orbit {
        let even_s = self.s.is_multiple_of(2);
        let even_index = self.index.is_multiple_of(2);
        match (self.kind, even_s && !even_index) {
            (ElementKind::Reflection, false) => Orbit::O0,
            (ElementKind::Reflection, true) => Orbit::O1,
            (ElementKind::Rotation, false) => Orbit::O2,
            (ElementKind::Rotation, true) => Orbit::O3,
        }
    }

    /// Plus/minus labelling used by the two-orbit closed form. Only defined
    /// for even `s`.
    pub fn classify(&self, m_is_odd: bool) -> Result<FactorClass> {
        if self.s % 2 == 1 {
            return Err(Error::Validation(format!("classify requires even s, got s = {}", self.s)));
        }
        let parity_ok = match self.kind {
            ElementKind::Reflection => m_is_odd,
            ElementKind::Rotation => !m_is_odd,
        };
        if !parity_ok {
            return Ok(FactorClass::Excluded);
        }
        Ok(match self.orbit() {
            Orbit::O0 | Orbit::O2 => FactorClass::Plus,
            Orbit::O1 | Orbit::O3 => FactorClass::Minus,
        })
    }

    /// Real 2×2 matrix of the element, row major.
    pub fn matrix<R: Real>(&self) -> [[R; 2]; 2] {
        let theta = lit::<R>(2.0 * self.index as f64) * R::PI() / lit::<R>(self.s as f64);
        let (sin, cos) = theta.sin_cos();
        match self.kind {
            ElementKind::Rotation => [[cos, -sin], [sin, cos]],
            ElementKind::Reflection => [[cos, sin], [sin, -cos]],
        }
    }

    pub fn act<R: Real>(&self, x: [R; 2]) -> [R; 2] {
        let m = self.matrix::<R>();
        [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ElementKind::Rotation => write!(f, "r{}", self.index),
            ElementKind::Reflection => write!(f, "s{}", self.index),
        }
    }
}

fn wrap(index: i64, s: u32) -> u32 {
    index.rem_euclid(s as i64) as u32
}

/// A positive root together with its reflection and orbit.
#[derive(Clone, Copy, Debug)]
pub struct PositiveRoot<R> {
    /// `j` in `1..=s`.
    pub j: u32,
    pub vector: [R; 2],
    pub reflection: DihedralElement,
    pub orbit: Orbit,
}

/// The dihedral root system I₂(s) with positive roots `α_j = -i·e^{ijπ/s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralSystem {
    s: u32,
}

impl DihedralSystem {
    pub fn new(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::Validation(format!("dihedral system needs s >= 2, got {s}")));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_even(&self) -> bool {
        self.s.is_multiple_of(2)
    }

    /// `q = s/2` for even `s`.
    pub fn half(&self) -> Option<u32> {
        self.is_even().then_some(self.s / 2)
    }

    pub fn order(&self) -> usize {
        2 * self.s as usize
    }

    pub fn identity(&self) -> DihedralElement {
        DihedralElement::identity(self.s)
    }

    pub fn rotation(&self, j: i64) -> DihedralElement {
        DihedralElement::rotation(self.s, j)
    }

    pub fn reflection(&self, j: i64) -> DihedralElement {
        DihedralElement::reflection(self.s, j)
    }

    /// All `2s` elements in ordinal order.
    pub fn elements(&self) -> impl Iterator<Item = DihedralElement> + '_ {
        let s = self.s;
        (0..s)
            .map(move |j| DihedralElement::rotation(s, j as i64))
            .chain((0..s).map(move |j| DihedralElement::reflection(s, j as i64)))
    }

    pub fn element_at(&self, ordinal: usize) -> DihedralElement {
        let s = self.s as usize;
        if ordinal < s {
            self.rotation(ordinal as i64)
        } else {
            self.reflection((ordinal - s) as i64)
        }
    }

    /// `α_j = (sin(jπ/s), -cos(jπ/s))` for `j = 1..=s`. The reflection in
    /// `α_j^⊥` is `σ_j`.
    pub fn positive_roots<R: Real>(&self) -> Vec<PositiveRoot<R>> {
        (1..=self.s)
            .map(|j| {
                let angle = lit::<R>(j as f64) * R::PI() / lit::<R>(self.s as f64);
                let reflection = self.reflection(j as i64);
                PositiveRoot { j, vector: [angle.sin(), -angle.cos()], reflection, orbit: reflection.orbit() }
            })
            .collect()
    }

    /// `x - 2⟨α, x⟩α` for a unit root `α`.
    pub fn reflect_in<R: Real>(alpha: [R; 2], x: [R; 2]) -> [R; 2] {
        let two = lit::<R>(2.0);
        let d = alpha[0] * x[0] + alpha[1] * x[1];
        [x[0] - two * d * alpha[0], x[1] - two * d * alpha[1]]
    }
}

/// A multiplicity function on I₂(s): `k1` on 𝒪₀ (all roots when `s` is odd),
/// `k2` on 𝒪₁.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplicity<T> {
    k1: T,
    k2: T,
}

impl<T: Ring> Multiplicity<T> {
    pub fn new(sys: &DihedralSystem, k1: T, k2: T) -> Result<Self> {
        if !sys.is_even() && k1 != k2 {
            return Err(Error::Validation(format!(
                "odd s = {} has a single root orbit; k1 and k2 must agree (got {:?} and {:?})",
                sys.s(),
                k1,
                k2
            )));
        }
        Ok(Self { k1, k2 })
    }

    /// Constant multiplicity.
    pub fn constant(k: T) -> Self {
        Self { k1: k.clone(), k2: k }
    }

    pub fn k1(&self) -> &T {
        &self.k1
    }

    pub fn k2(&self) -> &T {
        &self.k2
    }

    pub fn is_constant(&self) -> bool {
        self.k1 == self.k2
    }

    pub fn on_orbit(&self, orbit: Orbit) -> &T {
        match orbit {
            Orbit::O1 | Orbit::O3 => &self.k2,
            Orbit::O0 | Orbit::O2 => &self.k1,
        }
    }

    /// `k(α)` for the root whose reflection is `g`; zero on rotations.
    pub fn on_element(&self, g: &DihedralElement) -> T {
        if g.is_reflection() {
            self.on_orbit(g.orbit()).clone()
        } else {
            T::zero()
        }
    }

    /// `γ = Σ_{α∈R₊} k(α)`, summed over the root list.
    pub fn gamma(&self, sys: &DihedralSystem) -> T {
        sys.elements().filter(|g| g.is_reflection()).fold(T::zero(), |acc, g| acc + self.on_element(&g))
    }

    /// `γ` from the closed expression: `q(k1+k2)` for `s = 2q`, `s·k1` for odd `s`.
    pub fn gamma_closed(&self, sys: &DihedralSystem) -> T {
        match sys.half() {
            Some(q) => times(q as usize, self.k1.clone() + self.k2.clone()),
            None => times(sys.s() as usize, self.k1.clone()),
        }
    }

    /// `k + c` on every root.
    pub fn shifted(&self, c: T) -> Self {
        Self { k1: self.k1.clone() + c.clone(), k2: self.k2.clone() + c }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Multiplicity<U> {
        Multiplicity { k1: f(&self.k1), k2: f(&self.k2) }
    }
}

fn times<T: Ring>(n: usize, v: T) -> T {
    (0..n).fold(T::zero(), |acc, _| acc + v.clone())
}

impl<R: Real> Multiplicity<Complex<R>> {
    pub fn real(sys: &DihedralSystem, k1: R, k2: R) -> Result<Self> {
        Self::new(sys, Complex::new(k1, R::zero()), Complex::new(k2, R::zero()))
    }

    /// `δ = Σ_{α∈R₊} |k(α)|`.
    pub fn delta(&self, sys: &DihedralSystem) -> R {
        sys.elements().filter(|g| g.is_reflection()).map(|g| self.on_element(&g).norm()).sum()
    }

    /// `δ < |1+γ|`, the condition under which the resolvent series converges.
    pub fn series_ok(&self, sys: &DihedralSystem) -> bool {
        self.delta(sys) < (self.gamma(sys) + R::one()).norm()
    }

    pub fn is_real_nonnegative(&self) -> bool {
        [self.k1, self.k2].iter().all(|k| k.im.is_zero() && k.re >= R::zero())
    }
}
