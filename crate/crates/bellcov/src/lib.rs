//! Covariance-matrix transformations for Gaussian bosonic states under
//! homodyne, bell-like, and heterodyne detections.
//!
//! An n-mode Gaussian state is described, up to displacements, by its
//! 2n x 2n covariance matrix in (q1, p1, ..., qn, pn) ordering, normalized
//! so that the vacuum covariance matrix is the identity. Measuring some of
//! the modes leaves the rest in a Gaussian state whose covariance matrix
//! follows deterministically from the input; this crate implements those
//! update rules in closed form, for ideal detectors and for detectors with
//! quantum efficiency below one:
//!
//! - [`detection::homodyne`]: one quadrature of the last mode;
//! - [`detection::bell_like`]: the last two modes mixed on a beam splitter
//!   of arbitrary transmissivity, then homodyned in conjugate quadratures;
//! - [`detection::standard_bell`]: the balanced special case, through its
//!   own reduced formula;
//! - [`detection::heterodyne`]: both quadratures of the last mode at once;
//! - [`detection::remote_state_prep`]: the single-mode state left by
//!   homodyning one arm of a two-mode squeezed state.
//!
//! Every closed form is checked against [`oracle`], an independent stepwise
//! pipeline built only from vacuum dilations, explicit beam-splitter
//! congruences, and general-pseudoinverse conditioning. The pipeline records
//! each intermediate matrix in a [`oracle::StepTrace`], and agreement is
//! enforced both in the test suite and, on request, at runtime by the
//! `bellcov` command-line tool.
//!
//! # Conventions
//!
//! - Vacuum variance is one: `CovarianceMatrix::vacuum(n)` is the identity.
//!   With the other common normalization (vacuum variance 1/2) all matrices
//!   here are twice theirs.
//! - Detections always act on the trailing modes. Use
//!   [`gaussian::CovarianceMatrix::permute_modes`] to move other modes last.
//! - A state is accepted as physical when the smallest eigenvalue of
//!   V + i Omega is at least -1e-9; see [`gaussian::BONA_FIDE_TOL`].
//! - Efficiencies live in (0, 1]. Zero efficiency is rejected rather than
//!   modeled, because a detector that registers nothing conditions nothing.
//!
//! # Example
//!
//! ```
//! use bellcov::{bell_like, CovarianceMatrix, Efficiency};
//!
//! // Entanglement swapping: two EPR pairs, one arm of each measured.
//! let pair = CovarianceMatrix::epr(2.0)?;
//! let both = pair.direct_sum(&pair).permute_modes(&[0, 3, 1, 2])?;
//! let eta = Efficiency::new(0.9)?;
//! let swapped = bell_like(&both, 0.5, eta, eta)?;
//! assert_eq!(swapped.n_modes(), 2);
//! assert!(swapped.validate().bona_fide);
//! # Ok::<(), bellcov::Error>(())
//! ```
//!
//! The `examples/` directory exercises each capability end to end:
//! remote state preparation, entanglement swapping, heterodyne projection,
//! a transmissivity sweep, the stepwise trace, and the document format.

pub mod detection;
pub mod document;
mod error;
pub mod gaussian;
pub mod mat;
pub mod oracle;

pub use detection::{
    bell_like, gamma_matrix, heterodyne, homodyne, kappa_matrices, remote_state_prep,
    standard_bell, DetectionKind, DetectionSpec, GammaMatrix, KappaSet,
};
pub use document::{CmDocument, DocumentError};
pub use error::{Error, Result};
pub use gaussian::{
    validate_matrix, BlockPartition, CovarianceMatrix, Efficiency, ValidationReport,
};
pub use mat::{Mat, Quadrature};
pub use oracle::{bell_like_stepwise, general_pseudoinverse, homodyne_stepwise, StepTrace};
