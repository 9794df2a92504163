use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("prime mismatch: expected {expected}, found {found}")]
    PrimeMismatch { expected: u64, found: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("residue {residue} is not a unit mod {prime}")]
    NotAUnit { residue: String, prime: u64 },

    #[error("precision too low: need at least {needed}, have {found}")]
    PrecisionTooLow { needed: u32, found: u32 },

    #[error("denominator {den} is divisible by {prime}")]
    DenominatorDivisible { den: String, prime: u64 },

    #[error("classes live on different space models")]
    SpaceMismatch,

    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("constant term is not a unit, cannot invert")]
    NonUnitConstantTerm,

    #[error("target space is not a truncation of the source space")]
    NotATruncation,

    #[error("no coefficient morphism {from} -> {to}")]
    UnsupportedCoefficientMap { from: String, to: String },

    #[error("division by {divisor} is not exact on residue {residue}")]
    InexactDivision { divisor: u64, residue: String },

    #[error("Kervaire coefficients cover f_1..f_{have} but f_{needed} is required")]
    InsufficientCoeffs { needed: u32, have: u32 },

    #[error("pairing indeterminate at this precision: {0}")]
    IndeterminatePairing(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed JSON document: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
