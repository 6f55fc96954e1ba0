//! Dunkl operators, the intertwining operator and the Dunkl kernel for the
//! dihedral root systems I₂(s).
//!
//! The combinatorial layer ([`group`], [`algebra`], [`coeffs`]) is exact and
//! generic over any [`Ring`]; the analytic layer ([`poly`], [`operator`],
//! [`kernel`], [`shift`]) is generic over a [`Real`] type and works with
//! complex coefficients. The [`b2`] module holds the quadrature-based
//! representation for I₂(4) and is `f64` only.
//!
//! Most callers want the concrete aliases below:
//!
//! ```
//! use dunkl::{Dunkl, DihedralSystem, ComplexMultiplicity};
//!
//! let sys = DihedralSystem::new(4).unwrap();
//! let k = ComplexMultiplicity::real(&sys, 1.0, 1.0).unwrap();
//! let ops = Dunkl::new(sys, k);
//! let value = ops.dunkl_kernel([0.3, 0.5], [1.0, -0.2], 1e-12, 40).unwrap();
//! assert!(value.converged);
//! ```

pub mod algebra;
pub mod b2;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod group;
pub mod kernel;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod shift;
pub mod verify;

pub use algebra::GroupAlgebraMap;
pub use coeffs::{CoeffTable, SumMode};
pub use error::{Error, Result};
pub use group::{DihedralElement, DihedralSystem, ElementKind, FactorClass, Multiplicity, Orbit};
pub use kernel::{GradedKernel, KernelValue};
pub use linalg::OperatorMatrix;
pub use operator::DunklOperators;
pub use poly::HomogeneousPolynomial;
pub use scalar::{Real, Ring};
pub use shift::{GradedU, UProvenance};

/// Exact rational scalar used for the factorization coefficients.
pub type Rational = num::BigRational;
/// Complex double used by the analytic layer.
pub type Complex64 = num::complex::Complex64;

pub type Dunkl = DunklOperators<f64>;
pub type Poly = HomogeneousPolynomial<f64>;
pub type Matrix = OperatorMatrix<f64>;
pub type Kernel = GradedKernel<f64>;
pub type ExactMultiplicity = Multiplicity<Rational>;
pub type ComplexMultiplicity = Multiplicity<Complex64>;
pub type ExactCoeffTable = CoeffTable<Rational>;
