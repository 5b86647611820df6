//! Stepwise reference pipeline for conditional Gaussian states.
//!
//! Instead of closed-form update rules, everything here is built from three
//! elementary operations: dilate with a vacuum ancilla, apply an explicit
//! symplectic congruence, and condition on an ideal quadrature measurement
//! with a general SVD-based Moore-Penrose pseudoinverse. Detector efficiency
//! is realized physically, as a beam splitter of transmissivity eta that
//! routes part of the signal into a vacuum mode which is then discarded.
//!
//! The path is deliberately slower and structurally different from the
//! [`crate::detection`] formulas, so agreement between the two is evidence
//! that both are right. Every intermediate matrix is recorded in a
//! [`StepTrace`] for inspection.

use nalgebra as na;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, Efficiency};
use crate::mat::{self, Mat, Quadrature, POSITIVITY_TOL};

/// Agreement threshold between a closed-form result and the stepwise
/// reference, as a scale-relative max-norm deviation.
pub const AGREEMENT_RTOL: f64 = 1e-10;

/// Singular values below this fraction of the largest one are treated as
/// zero when forming the general pseudoinverse.
pub const SVD_RELATIVE_CUTOFF: f64 = 1e-12;

/// Label of the beam-splitter step inside [`bell_like_stepwise`] traces.
pub const BELL_SPLITTER_LABEL: &str = "bell-splitter";

/// What kind of elementary operation a trace step records.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// The matrix as supplied.
    Input,
    /// A vacuum mode was appended.
    Dilation,
    /// A symplectic congruence S V S^T was applied.
    Symplectic,
    /// Modes were discarded (rows and columns deleted).
    TraceOut,
    /// A measurement conditioning (Schur-type complement) was applied.
    Conditioning,
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Input => "input",
            Self::Dilation => "dilation",
            Self::Symplectic => "symplectic",
            Self::TraceOut => "trace-out",
            Self::Conditioning => "conditioning",
        })
    }
}

/// One recorded intermediate state of the pipeline.
#[derive(Clone, Debug)]
pub struct Step {
    /// Operation class.
    pub kind: StepKind,
    /// Human-readable label, unique within a trace.
    pub label: String,
    /// Covariance matrix after the operation.
    pub matrix: Mat,
}

/// Ordered record of every intermediate covariance matrix.
#[derive(Clone, Debug, Default)]
pub struct StepTrace {
    steps: Vec<Step>,
}

impl StepTrace {
    fn push(&mut self, kind: StepKind, label: impl Into<String>, matrix: Mat) {
        self.steps.push(Step {
            kind,
            label: label.into(),
            matrix,
        });
    }

    /// All steps in execution order.
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Find a step by its label.
    pub fn find(&self, label: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.label == label)
    }

    /// The final matrix, if any step ran.
    pub fn last_matrix(&self) -> Option<&Mat> {
        self.steps.last().map(|s| &s.matrix)
    }
}

/// General Moore-Penrose pseudoinverse through SVD, with singular values
/// below [`SVD_RELATIVE_CUTOFF`] times the largest treated as zero.
pub fn general_pseudoinverse(m: &Mat) -> Mat {
    let svd = na::SVD::new(m.clone(), true, true);
    let largest = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    svd.pseudo_inverse(SVD_RELATIVE_CUTOFF * largest)
        .expect("singular vectors were requested")
}

/// Homodyne detection of the last mode, stepwise: vacuum dilation, an
/// efficiency beam splitter, discarding the lost part, then conditioning on
/// the measured quadrature with the general pseudoinverse.
pub fn homodyne_stepwise(
    v: &CovarianceMatrix,
    quad: Quadrature,
    eta: Efficiency,
) -> Result<(CovarianceMatrix, StepTrace)> {
    let mut trace = StepTrace::default();
    trace.push(StepKind::Input, "input", v.matrix().clone());
    let out = conditioned_last_mode(v, quad, eta, "", &mut trace)?;
    Ok((out, trace))
}

/// Bell-like detection of the last two modes, stepwise: mix them on a beam
/// splitter of transmissivity `t`, homodyne the q quadrature of the last
/// output (efficiency `eta`), then the p quadrature of the remaining output
/// (efficiency `eta_prime`). Each sub-measurement goes through the full
/// dilation pipeline of [`homodyne_stepwise`].
pub fn bell_like_stepwise(
    v: &CovarianceMatrix,
    t: f64,
    eta: Efficiency,
    eta_prime: Efficiency,
) -> Result<(CovarianceMatrix, StepTrace)> {
    if v.n_modes() < 3 {
        return Err(Error::InsufficientModes {
            got: v.n_modes(),
            need: 3,
        });
    }
    let mut trace = StepTrace::default();
    trace.push(StepKind::Input, "input", v.matrix().clone());

    let splitter = mat::embed_last_two(&mat::beam_splitter(t)?, v.n_modes() - 2)?;
    let mixed = CovarianceMatrix::new(mat::symmetrized(
        &splitter * v.matrix() * splitter.transpose(),
    ))?;
    trace.push(
        StepKind::Symplectic,
        BELL_SPLITTER_LABEL,
        mixed.matrix().clone(),
    );

    let after_q = conditioned_last_mode(&mixed, Quadrature::Q, eta, "q-detection:", &mut trace)?;
    let out = conditioned_last_mode(
        &after_q,
        Quadrature::P,
        eta_prime,
        "p-detection:",
        &mut trace,
    )?;
    Ok((out, trace))
}

/// Measure one quadrature of the last mode and return the conditional state
/// of the rest, recording each stage under `prefix` in the trace.
fn conditioned_last_mode(
    v: &CovarianceMatrix,
    quad: Quadrature,
    eta: Efficiency,
    prefix: &str,
    trace: &mut StepTrace,
) -> Result<CovarianceMatrix> {
    if v.n_modes() < 2 {
        return Err(Error::InsufficientModes {
            got: v.n_modes(),
            need: 2,
        });
    }
    let split = v.split_last_mode()?;
    let measured = split.b[(quad.index(), quad.index())];
    if measured <= POSITIVITY_TOL {
        return Err(Error::NonPositiveVariance {
            quad,
            value: measured,
        });
    }

    // Loss model: the signal meets a vacuum mode on a beam splitter of
    // transmissivity eta; the reflected part is lost.
    let dilated = v.append_vacuum_mode();
    trace.push(
        StepKind::Dilation,
        format!("{prefix}vacuum-dilation"),
        dilated.matrix().clone(),
    );

    let splitter = mat::embed_last_two(&mat::beam_splitter(eta.value())?, v.n_modes() - 1)?;
    let mixed = mat::symmetrized(&splitter * dilated.matrix() * splitter.transpose());
    trace.push(
        StepKind::Symplectic,
        format!("{prefix}efficiency-splitter"),
        mixed.clone(),
    );

    // The transmitted signal sits in the next-to-last slot; the last slot
    // holds the lost combination, which is discarded.
    let kept_dim = mixed.nrows() - 2;
    let kept = mixed.view((0, 0), (kept_dim, kept_dim)).into_owned();
    trace.push(
        StepKind::TraceOut,
        format!("{prefix}loss-traced"),
        kept.clone(),
    );

    let reduced = CovarianceMatrix::new(kept)?;
    let split = reduced.split_last_mode()?;
    let projected = quad.projector() * &split.b * quad.projector();
    let conditioned = mat::symmetrized(
        &split.a - &split.c * general_pseudoinverse(&projected) * split.c.transpose(),
    );
    trace.push(
        StepKind::Conditioning,
        format!("{prefix}{quad}-conditioning"),
        conditioned.clone(),
    );
    CovarianceMatrix::new(conditioned)
}
