//! Small dense complex matrices acting on the monomial basis of 𝒫_n.

use std::ops::{Add, Mul, Sub};

use num::complex::Complex;
use num::traits::{One, Zero};

use crate::poly::HomogeneousPolynomial;
use crate::scalar::Real;

/// Matrix of a linear endomorphism of 𝒫_n in the monomial basis. Column `j`
/// holds the image of `x₁^{n-j}x₂^{j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<R> {
    degree: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> OperatorMatrix<R> {
    pub fn zeros(degree: usize) -> Self {
        let dim = degree + 1;
        Self { degree, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(degree: usize) -> Self {
        let mut m = Self::zeros(degree);
        for i in 0..=degree {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Matrix of a linear map given by its action on polynomials.
    pub fn from_action<F>(degree: usize, f: F) -> Self
    where
        F: Fn(&HomogeneousPolynomial<R>) -> HomogeneousPolynomial<R>,
    {
        let mut m = Self::zeros(degree);
        for j in 0..=degree {
            let image = f(&HomogeneousPolynomial::monomial(degree - j, j, Complex::one()));
            assert_eq!(image.degree(), degree, "action must preserve degree");
            for (i, c) in image.coeffs().iter().enumerate() {
                m[(i, j)] = *c;
            }
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn apply(&self, p: &HomogeneousPolynomial<R>) -> HomogeneousPolynomial<R> {
        assert_eq!(p.degree(), self.degree, "matrix/polynomial degree mismatch");
        let dim = self.dim();
        let coeffs = (0..dim)
            .map(|i| (0..dim).fold(Complex::zero(), |acc, j| acc + self[(i, j)] * p.coeff(j)))
            .collect();
        HomogeneousPolynomial::new(coeffs)
    }

    pub fn scale(&self, c: Complex<R>) -> Self {
        Self { degree: self.degree, data: self.data.iter().map(|v| *v * c).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex<R>) {
        assert_eq!(self.degree, other.degree);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + *b * c;
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> R {
        let dim = self.dim();
        (0..dim).map(|i| (0..dim).map(|j| self[(i, j)].norm()).sum::<R>()).fold(R::zero(), R::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> R {
        let dim = self.dim();
        (0..dim).map(|j| (0..dim).map(|i| self[(i, j)].norm()).sum::<R>()).fold(R::zero(), R::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(R::zero(), R::max)
    }

    pub fn pow(&self, m: usize) -> Self {
        (0..m).fold(Self::identity(self.degree), |acc, _| &acc * self)
    }

    /// Inverse by LU with partial pivoting, together with the 1-norm
    /// condition number `‖M‖₁‖M⁻¹‖₁`. `None` when a pivot vanishes.
    pub fn inverse_with_condition(&self) -> Option<(Self, R)> {
        let dim = self.dim();
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..dim).collect();
        for col in 0..dim {
            let pivot = (col..dim)
                .max_by(|&r1, &r2| a[r1 * dim + col].norm().partial_cmp(&a[r2 * dim + col].norm()).unwrap())
                .unwrap();
            if a[pivot * dim + col].norm().is_zero() {
                return None;
            }
            if pivot != col {
                for j in 0..dim {
                    a.swap(pivot * dim + j, col * dim + j);
                }
                perm.swap(pivot, col);
            }
            let diag = a[col * dim + col];
            for row in col + 1..dim {
                let factor = a[row * dim + col] / diag;
                a[row * dim + col] = factor;
                for j in col + 1..dim {
                    let upper = a[col * dim + j];
                    a[row * dim + j] = a[row * dim + j] - factor * upper;
                }
            }
        }
        let mut inv = Self::zeros(self.degree);
        for rhs in 0..dim {
            // forward substitution on P·e_rhs
            let mut y = vec![Complex::zero(); dim];
            for i in 0..dim {
                let b = if perm[i] == rhs { Complex::one() } else { Complex::zero() };
                y[i] = (0..i).fold(b, |acc, j| acc - a[i * dim + j] * y[j]);
            }
            for i in (0..dim).rev() {
                let s = (i + 1..dim).fold(y[i], |acc, j| acc - a[i * dim + j] * inv[(j, rhs)]);
                inv[(i, rhs)] = s / a[i * dim + i];
            }
        }
        let cond = self.norm_one() * inv.norm_one();
        Some((inv, cond))
    }
}

impl<R> std::ops::Index<(usize, usize)> for OperatorMatrix<R> {
    type Output = Complex<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        &self.data[i * (self.degree + 1) + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for OperatorMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        &mut self.data[i * (self.degree + 1) + j]
    }
}

impl<R: Real> Mul for &OperatorMatrix<R> {
    type Output = OperatorMatrix<R>;
    fn mul(self, rhs: Self) -> OperatorMatrix<R> {
        assert_eq!(self.degree, rhs.degree);
        let dim = self.dim();
        let mut out = OperatorMatrix::zeros(self.degree);
        for i in 0..dim {
            for l in 0..dim {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    out[(i, j)] = out[(i, j)] + a * rhs[(l, j)];
                }
            }
        }
        out
    }
}

impl<R: Real> Add for &OperatorMatrix<R> {
    type Output = OperatorMatrix<R>;
    fn add(self, rhs: Self) -> OperatorMatrix<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex::one());
        out
    }
}

impl<R: Real> Sub for &OperatorMatrix<R> {
    type Output = OperatorMatrix<R>;
    fn sub(self, rhs: Self) -> OperatorMatrix<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, -Complex::<R>::one());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    #[test]
    fn inverse_of_well_conditioned_matrix() {
        let mut m = Matrix::identity(3);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] += Complex::new(0.1 * (i as f64 - j as f64), 0.05 * (i * j) as f64);
            }
        }
        let (inv, cond) = m.inverse_with_condition().unwrap();
        assert!((&m * &inv).max_abs_diff(&Matrix::identity(3)) < 1e-14);
        assert!((1.0..10.0).contains(&cond));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Matrix::zeros(2);
        assert!(m.inverse_with_condition().is_none());
    }
}
