//! Finite classical orthogonal polynomial families and their incomplete
//! symmetric generalizations.
//!
//! The crate builds the finite families `M`, `N`, `I`, `J` (plus the monic
//! generalized Bessel polynomials) and the two incomplete symmetric families
//! `Φ_n^{(r,s)}(x; a, b, m)` and `Ψ_n^{(r,s)}(x; a, m)`, evaluates their closed
//! form norm squares and admissibility bounds, and checks every identity three
//! ways: exact rational ODE residuals, double-exponential quadrature, and a
//! Gram-Schmidt oracle driven by closed-form moments.
//!
//! Core math is generic over the scalar type. Polynomials are
//! [`SparsePoly<T>`](polycore::SparsePoly) over any coefficient ring, the
//! quadrature rules and gamma functions are generic over [`num_traits::Float`],
//! and the Gram-Schmidt kernel runs over any field. The aliases below fix the
//! two instantiations used throughout: exact [`Rational`] and binary64 [`Real`].

pub mod approx;
pub mod classical;
pub mod error;
pub mod family;
pub mod incomplete;
pub mod numkernel;
pub mod polycore;
pub mod quadrature;
pub mod sturm;
pub mod verify;

pub use error::{Error, Result};
pub use family::Family;
pub use numkernel::LogScaled;
pub use polycore::{Parity, SparsePoly};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

/// Floating scalar used for quadrature and evaluation.
pub type Real = f64;

/// Complex scalar over [`Real`].
pub type Complex = num_complex::Complex<Real>;

/// Exact-coefficient polynomial.
pub type RationalPoly = SparsePoly<Rational>;

/// Floating-coefficient polynomial (the `J` family lives here).
pub type RealPoly = SparsePoly<Real>;

/// Differential equation with exact coefficients.
pub type RationalEquation = sturm::SLEquation<Rational>;
