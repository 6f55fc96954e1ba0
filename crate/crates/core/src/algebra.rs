//! Elements of the group algebra of D₂(s) as dense maps `g ↦ c(g)`.

use std::ops::{Add, Mul};

use num::traits::Zero;

use crate::group::{DihedralElement, DihedralSystem};

/// `Σ_g c(g)·g`, stored in the ordinal order of [`DihedralSystem::elements`].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraMap<T> {
    system: DihedralSystem,
    values: Vec<T>,
}

impl<T: Clone + Zero> GroupAlgebraMap<T> {
    pub fn zero(system: DihedralSystem) -> Self {
        Self { system, values: vec![T::zero(); system.order()] }
    }

    pub fn from_fn<F: FnMut(&DihedralElement) -> T>(system: DihedralSystem, mut f: F) -> Self {
        let values = system.elements().map(|g| f(&g)).collect();
        Self { system, values }
    }

    /// The unit `1·e`.
    pub fn unit(system: DihedralSystem, one: T) -> Self {
        let mut out = Self::zero(system);
        out.values[0] = one;
        out
    }

    pub fn system(&self) -> &DihedralSystem {
        &self.system
    }

    pub fn get(&self, g: &DihedralElement) -> &T {
        &self.values[g.ordinal()]
    }

    pub fn set(&mut self, g: &DihedralElement, value: T) {
        self.values[g.ordinal()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (DihedralElement, &T)> + '_ {
        self.system.elements().zip(self.values.iter())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |acc, v| acc + v)
    }

    pub fn map<U: Clone + Zero, F: Fn(&T) -> U>(&self, f: F) -> GroupAlgebraMap<U> {
        GroupAlgebraMap { system: self.system, values: self.values.iter().map(f).collect() }
    }
}

impl<T> GroupAlgebraMap<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    /// Product in the group algebra: `(a*b)(g) = Σ_{hk=g} a(h)b(k)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.system);
        for (h, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.iter() {
                if b.is_zero() {
                    continue;
                }
                let hk = h.compose_unchecked(&k);
                let slot = &mut out.values[hk.ordinal()];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_respects_group_law() {
        let sys = DihedralSystem::new(5).unwrap();
        let r1 = sys.rotation(1);
        let f2 = sys.reflection(2);
        let a = GroupAlgebraMap::from_fn(sys, |g| i64::from(*g == r1));
        let b = GroupAlgebraMap::from_fn(sys, |g| i64::from(*g == f2));
        let ab = a.convolve(&b);
        assert_eq!(*ab.get(&r1.compose(&f2).unwrap()), 1);
        assert_eq!(ab.sum(), 1);
    }

    #[test]
    fn unit_is_neutral() {
        let sys = DihedralSystem::new(4).unwrap();
        let a = GroupAlgebraMap::from_fn(sys, |g| g.ordinal() as i64 + 1);
        let e = GroupAlgebraMap::unit(sys, 1i64);
        assert_eq!(a.convolve(&e), a);
        assert_eq!(e.convolve(&a), a);
    }
}
