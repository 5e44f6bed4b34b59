//! Desk-scale experiments on unary languages.
//!
//! Everything here is exact except [`abs_expansion_residual`], which works in
//! `f64`.

mod density;
mod equidist;
mod expansion;
mod gseq;
mod languages;
pub mod output;

use thiserror::Error;

pub use density::{lower_density, DensityPoint, DensityReport};
pub use equidist::{box_ratio, weyl_box_ratio, weyl_sequence, Alpha, IntervalBox, SequenceSpec, WeylTerm};
pub use expansion::{abs_expansion_residual, expansion_bound};
pub use gseq::g_sequence;
pub use languages::{gen_poly_lang, gen_prime_lang, is_prime, Polynomial, UnaryLanguage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("interval box has no intervals")]
    EmptyBox,
    #[error("interval [{lo}, {hi}) is not a nonempty subinterval of [0, 1]")]
    BadInterval { lo: String, hi: String },
    #[error("sequence is empty")]
    EmptySequence,
    #[error("point has {found} coordinates, box has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sequence step must be at least 1")]
    ZeroStep,
    #[error("sequence count must be at least 1")]
    ZeroCount,
    #[error("malformed decimal `{0}`")]
    MalformedDecimal(String),
    #[error("precision 1e-{claimed} exceeds the {available} fractional digits supplied")]
    PrecisionExceedsDigits { claimed: u32, available: u32 },
    #[error(
        "precision 1e-{precision} leaves fewer than {} reliable digits for {terms} terms",
        equidist::RELIABLE_DIGITS
    )]
    InsufficientPrecision { precision: u32, terms: u64 },
    #[error("expansion point A must be nonzero")]
    ZeroAmplitude,
    #[error("automaton alphabet has {0} symbols; a unary alphabet is required")]
    NotUnary(usize),
    #[error("polynomial coefficient {0} is negative; only nonnegative coefficients give a monotone image")]
    NegativeCoefficient(i64),
    #[error("csv output failed: {0}")]
    Csv(String),
}
