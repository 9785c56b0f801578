//! Exact scalar arithmetic: rationals, polynomials, fields, square classes.
//!
//! Key operations:
//! - [`factor::factor_over_q`]: exact factorization in Q[t] (Zassenhaus).
//! - [`squares::square_class`]: squarefree representative of a rational
//!   modulo squares, with certified integer factorization underneath.
//! - [`squares::is_square_in_quadratic_field`]: closed-form square test in
//!   Q(sqrt(d)).
//! - [`sturm::isolate_real_roots`]: Sturm-sequence real-root isolation.
//!
//! Coefficient vectors are always stored lowest degree first.

pub mod field;
pub mod intfactor;
pub mod poly;
pub mod factor;
pub mod numberfield;
pub mod squares;
pub mod sturm;

pub use field::{ExactSqrt, Field, FiniteField, Fp, Fq, Rationals};
pub use numberfield::{NumberField, NfElem};
pub use poly::Poly;
pub use squares::{rat_is_square, square_class};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, the base scalar of the crate.
pub type Rat = BigRational;

/// Convenience: rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience: rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Polynomial over Q, the workhorse coefficient domain.
pub type QPoly = Poly<Rationals>;
