use thiserror::Error;

/// Errors raised by the arithmetic and class-group layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation was called outside its domain (zero input, wrong level, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported base field: {0}")]
    UnsupportedField(String),

    #[error("not a CM extension: {0}")]
    NotCmExtension(String),

    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("not coprime to the modulus: {0}")]
    NotCoprime(String),

    /// The principality search ran out of budget before deciding.
    #[error("inconclusive principality search after {explored} lattice nodes")]
    Inconclusive { explored: u64 },

    /// Ideal enumeration did not reach every ray class.
    #[error("incomplete enumeration: found {found} classes, expected {expected}")]
    Incomplete { found: usize, expected: usize },

    #[error("not a CM type: {0}")]
    NotCmType(String),

    #[error("not implementable at desk scale: {0}")]
    NotImplementable(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    /// A resource budget (Minkowski enumeration, node count) was exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// An identity that must hold by construction failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
