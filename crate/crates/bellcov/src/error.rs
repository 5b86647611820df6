//! Crate-wide error type for construction and detection failures.

use thiserror::Error;

use crate::mat::Quadrature;

/// Failure modes of covariance-matrix construction and detection maps.
#[derive(Debug, Error)]
pub enum Error {
    /// A mode count of zero was supplied where at least one mode is required.
    #[error("mode count must be at least 1")]
    ZeroModes,

    /// A beam-splitter transmissivity outside the closed interval [0, 1].
    #[error("transmissivity {0} is outside [0, 1]")]
    InvalidTransmissivity(f64),

    /// A detector quantum efficiency outside the half-open interval (0, 1].
    /// Zero is rejected: a dead detector yields no conditioning rule.
    #[error("quantum efficiency {0} is outside (0, 1]")]
    InvalidEfficiency(f64),

    /// A two-mode squeezing parameter below the vacuum limit.
    #[error("EPR parameter mu = {0} must be at least 1")]
    EprParameter(f64),

    /// A rectangular matrix where a square one is required.
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    /// A matrix whose shape differs from the one the operation needs.
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    /// A covariance matrix must pair the q and p rows of each mode.
    #[error("covariance matrix dimension {dim} is odd; quadratures come in (q, p) pairs")]
    OddDimension { dim: usize },

    /// NaN or infinite entries.
    #[error("matrix entries must all be finite")]
    NonFinite,

    /// The state has too few modes for the requested measurement.
    #[error("operation needs at least {need} modes, got {got}")]
    InsufficientModes { got: usize, need: usize },

    /// A measured quadrature variance that is not strictly positive, which
    /// only happens when the input is not a valid covariance matrix.
    #[error("reduced covariance block is not positive: {quad} variance is {value}")]
    NonPositiveVariance { quad: Quadrature, value: f64 },

    /// The effective measured-block matrix lost positive definiteness, so the
    /// conditioning denominator is ill-defined.
    #[error("measured block is degenerate: {condition} = {value} is not positive")]
    DegenerateMeasuredBlock { condition: &'static str, value: f64 },

    /// A transmissivity was supplied for a detection that has none free.
    #[error("transmissivity applies only to bell-like detection")]
    TransmissivityNotApplicable,

    /// An index sequence that is not a permutation of the mode labels.
    #[error("{0:?} does not permute the modes 0..{1}")]
    InvalidPermutation(Vec<usize>, usize),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
