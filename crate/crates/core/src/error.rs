//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or checking an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Determinant or solve requested on a non-square matrix.
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// An operation needed moments beyond the functional's truncation depth.
    #[error("operation needs moment index {needed} but functional is truncated at {available}")]
    TruncationExceeded { needed: usize, available: usize },

    /// `<u, p^2> = 0`: the polynomial cannot be normalized (non-regularity witness).
    #[error("zero norm: <u, p^2> = 0 for degree {degree:?}")]
    ZeroNorm { degree: Option<usize> },

    /// A Hankel determinant vanished where regularity was required.
    #[error("functional not regular: Hankel determinant of order {order} is zero")]
    NotRegular { order: usize },

    /// Recurrence or relation tables do not reach the requested index.
    #[error("insufficient coefficients: need index {needed}, have {available} ({what})")]
    InsufficientCoefficients {
        what: &'static str,
        needed: usize,
        available: usize,
    },

    /// Family parameter outside the admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A Favard gamma coefficient is zero.
    #[error("gamma_{index} = 0 violates the recurrence nonvanishing condition")]
    FavardGate { index: usize },

    /// Input to the Favard oracle is not a monic simple set.
    #[error("not a basis: {0}")]
    NotABasis(String),

    /// A pairing needed the second functional, which is not available.
    #[error("missing functional: {0}")]
    MissingFunctional(&'static str),

    /// Matrix or column index outside the defined range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A Cramer system had zero determinant.
    #[error("singular system: det B_{n} = 0 on the {side} side")]
    SingularSystem { side: &'static str, n: usize },

    /// The initial conditions of the inverse problem do not hold.
    #[error("initial conditions fail: {0}")]
    InitialConditionsFail(String),

    /// A theorem hypothesis does not hold for this instance.
    #[error("hypothesis fails: {0}")]
    HypothesisFail(String),

    /// Instance document does not match the schema.
    #[error("schema error at {path}: {message}")]
    SchemaError { path: String, message: String },

    /// A rational literal could not be parsed.
    #[error("invalid rational {input:?}: {message}")]
    InvalidRational { input: String, message: String },

    /// The declared relation contradicts the supplied polynomial data.
    #[error("inconsistent instance: {0}")]
    InconsistentInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
