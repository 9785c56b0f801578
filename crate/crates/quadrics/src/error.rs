//! Crate error type.

use thiserror::Error;

/// Errors surfaced by the exact-arithmetic pipeline.
///
/// Every failure is explicit: no operation silently falls back to an
/// unverified answer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input matrices are not symmetric, square, or of matching dimension.
    #[error("invalid form input: {0}")]
    InvalidForm(String),

    /// The two forms span a line, not a pencil.
    #[error("forms are proportional; they span a point of the pencil line, not a pencil")]
    ProportionalForms,

    /// det(F + tG) vanishes identically; every member is singular.
    #[error("degenerate pencil: det(F + tG) is identically zero")]
    DegeneratePencil,

    /// A precondition of the requested operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Integer factorization gave up before certifying a factorization.
    #[error("integer factorization failed for {0}: budget exhausted before certification")]
    FactorizationFailed(String),

    /// A polynomial operation received an input outside its contract.
    #[error("polynomial input error: {0}")]
    PolyInput(String),

    /// Construction of the splitting field of the rank-6 member set failed
    /// because the field has degree > 4 over Q.
    #[error("splitting field too large: {0}")]
    SplittingFieldTooLarge(String),

    /// The splitting field has admissible degree but no supported
    /// constructor (cyclic or dihedral quartic resolvent shape).
    #[error("splitting field unsupported: {0}")]
    SplittingFieldUnsupported(String),

    /// An enumeration would exceed the fixed cost guard.
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    /// Requested p-adic precision exceeds the guard.
    #[error("precision too large: {0}")]
    PrecisionTooLarge(String),

    /// A residue-field computation landed outside the supported degrees.
    #[error("unsupported residue field: {0}")]
    UnsupportedResidueField(String),

    /// Reduction of a rational object modulo p is undefined.
    #[error("bad reduction at {prime}: {detail}")]
    BadReduction { prime: u64, detail: String },

    /// An internal exact identity failed to verify; indicates a bug, never
    /// silently ignored.
    #[error("internal check failed: {0}")]
    Internal(String),
}
