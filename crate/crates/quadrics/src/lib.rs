//! Exact-arithmetic analysis of pencils of two quadratic forms over Q.
//!
//! The crate works projectively: a pencil is the family `lambda*F + mu*G` of
//! quadratic forms spanned by two non-proportional symmetric Gram matrices
//! over Q. Everything is computed exactly (arbitrary-precision rationals,
//! exact polynomial factorization, Sturm sequences); no floating point is
//! used anywhere in a decision path.
//!
//! Module map:
//! - [`scalars`]: rationals, univariate polynomials, number fields, finite
//!   fields, square classes, factorization over Q, real-root isolation.
//! - [`forms`]: quadratic forms, subspaces, congruence diagonalization,
//!   rank/kernel/restriction/signature.
//! - [`pencil`]: characteristic polynomial, singular members, the rank-6
//!   case taxonomy, signature sweep, rank-6 eigenspace decomposition.
//! - [`local`]: Hilbert symbols, Hasse invariants, local Witt indices,
//!   global hyperbolic splitting, isotropy over Q, point searches.
//! - [`geometry`]: tangent spaces, dual quadrics, cone sections, finite
//!   field point enumeration, isotropic subspace search.
//! - [`residues`]: second-residue forms of the pencil at closed points of
//!   the projective line, the discriminant curve, and the plane criterion.
//! - [`report`] / [`verify`]: JSON reports and the seeded verification
//!   suites used by the CLI and the acceptance tests.
//!
//! The `parallel` feature (on by default) runs the data-parallel inner
//! loops (finite-field enumeration, point searches, verification suites)
//! on rayon; disabling it yields a dependency-free sequential fallback
//! with identical results.

#![forbid(unsafe_code)]

pub mod error;
pub mod par;
pub mod scalars;
pub mod forms;
pub mod pencil;
pub mod local;
pub mod geometry;
pub mod residues;
pub mod report;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
