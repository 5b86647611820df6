//! Plain-text documents for covariance matrices and pipeline traces.
//!
//! The format is line-oriented and human-diffable:
//!
//! ```text
//! format: bellcov-cm/1
//! modes: 2
//! ordering: q1 p1 q2 p2
//! meta generator: epr 2
//! matrix:
//! 2.0000000000000000e0 0.0000000000000000e0 1.7320508075688772e0 0.0000000000000000e0
//! ...
//! ```
//!
//! Numbers are written with 17 significant digits, so reading a document
//! back reproduces every `f64` bit for bit. Blank lines and lines starting
//! with `#` are ignored on input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::gaussian::CovarianceMatrix;
use crate::mat::{self, Mat};
use crate::oracle::StepTrace;

/// Header of covariance-matrix documents.
pub const FORMAT_HEADER: &str = "bellcov-cm/1";

/// Header of trace documents.
pub const TRACE_FORMAT_HEADER: &str = "bellcov-trace/1";

/// Failures while reading or building a document.
#[derive(Debug, Error)]
pub enum DocumentError {
    /// The file could not be read or written.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    /// The first line does not announce a known format.
    #[error("unsupported format {0:?}, expected {FORMAT_HEADER:?}")]
    UnsupportedFormat(String),

    /// A structural or numeric problem, with its 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The matrix or metadata violate the document invariants.
    #[error("invalid document: {0}")]
    Invalid(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> DocumentError {
    DocumentError::Parse {
        line,
        msg: msg.into(),
    }
}

/// A covariance matrix together with free-form string metadata, as stored
/// on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct CmDocument {
    n_modes: usize,
    matrix: Mat,
    metadata: BTreeMap<String, String>,
}

impl CmDocument {
    /// Wrap a matrix, checking the same shape invariants as
    /// [`CovarianceMatrix::new`] plus the metadata ones: keys are nonempty
    /// and free of `:` and newlines, values are single-line.
    pub fn new(matrix: Mat, metadata: BTreeMap<String, String>) -> Result<Self, DocumentError> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 || !dim.is_multiple_of(2) {
            return Err(DocumentError::Invalid(format!(
                "matrix is {}x{}, expected square with even nonzero dimension",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !mat::all_finite(&matrix) {
            return Err(DocumentError::Invalid(
                "matrix entries must all be finite".into(),
            ));
        }
        for (key, value) in &metadata {
            let key_ok = !key.is_empty() && !key.contains(':') && !key.contains('\n');
            let value_ok = !value.contains('\n');
            if !key_ok || !value_ok {
                return Err(DocumentError::Invalid(format!(
                    "metadata entry {key:?} must be single-line with a colon-free key"
                )));
            }
        }
        Ok(Self {
            n_modes: dim / 2,
            matrix,
            metadata,
        })
    }

    /// Document for a covariance matrix, with empty metadata.
    pub fn from_covariance(cm: &CovarianceMatrix) -> Self {
        Self {
            n_modes: cm.n_modes(),
            matrix: cm.matrix().clone(),
            metadata: BTreeMap::new(),
        }
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The stored matrix, exactly as read or supplied.
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// The metadata map.
    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    /// Insert or replace one metadata entry.
    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.insert(key.into(), value.into());
    }

    /// Interpret the stored matrix as a covariance matrix.
    pub fn covariance(&self) -> crate::error::Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.matrix.clone())
    }

    /// Render to the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "format: {FORMAT_HEADER}");
        let _ = writeln!(out, "modes: {}", self.n_modes);
        let _ = writeln!(out, "ordering: {}", ordering_line(self.n_modes));
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "meta {key}: {value}");
        }
        out.push_str("matrix:\n");
        write_rows(&mut out, &self.matrix);
        out
    }

    /// Parse the text format.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let mut lines = significant_lines(text);

        let (line_no, first) = lines
            .next()
            .ok_or_else(|| parse_err(0, "empty document"))?;
        let format = first
            .strip_prefix("format:")
            .ok_or_else(|| parse_err(line_no, "expected a `format:` line first"))?
            .trim();
        if format != FORMAT_HEADER {
            return Err(DocumentError::UnsupportedFormat(format.to_string()));
        }

        let (line_no, modes_line) = lines
            .next()
            .ok_or_else(|| parse_err(line_no, "missing `modes:` line"))?;
        let n_modes: usize = modes_line
            .strip_prefix("modes:")
            .ok_or_else(|| parse_err(line_no, "expected a `modes:` line"))?
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad mode count: {e}")))?;
        if n_modes == 0 {
            return Err(parse_err(line_no, "mode count must be at least 1"));
        }

        let (line_no, ordering) = lines
            .next()
            .ok_or_else(|| parse_err(line_no, "missing `ordering:` line"))?;
        let declared = ordering
            .strip_prefix("ordering:")
            .ok_or_else(|| parse_err(line_no, "expected an `ordering:` line"))?
            .trim();
        let expected = ordering_line(n_modes);
        if declared != expected {
            return Err(parse_err(
                line_no,
                format!("ordering must be {expected:?}, got {declared:?}"),
            ));
        }

        let mut metadata = BTreeMap::new();
        let mut last_line = line_no;
        loop {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| parse_err(last_line, "missing `matrix:` section"))?;
            last_line = line_no;
            if line == "matrix:" {
                break;
            }
            let rest = line
                .strip_prefix("meta ")
                .ok_or_else(|| parse_err(line_no, "expected `meta key: value` or `matrix:`"))?;
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, "metadata needs a `key: value` form"))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(parse_err(line_no, "metadata key must be nonempty"));
            }
            if metadata
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(parse_err(line_no, format!("duplicate metadata key {key:?}")));
            }
        }

        let dim = 2 * n_modes;
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (line_no, row) = lines
                .next()
                .ok_or_else(|| parse_err(last_line, format!("expected {dim} matrix rows")))?;
            last_line = line_no;
            let mut count = 0usize;
            for token in row.split_whitespace() {
                let value: f64 = token
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad number {token:?}: {e}")))?;
                if !value.is_finite() {
                    return Err(parse_err(line_no, format!("non-finite entry {token:?}")));
                }
                entries.push(value);
                count += 1;
            }
            if count != dim {
                return Err(parse_err(
                    line_no,
                    format!("expected {dim} entries per row, got {count}"),
                ));
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(parse_err(line_no, "unexpected content after the matrix"));
        }

        let matrix = Mat::from_row_slice(dim, dim, &entries);
        Self::new(matrix, metadata)
    }
}

/// Render a pipeline trace to text. Traces are a diagnostic output; there is
/// no parser for them.
pub fn trace_to_text(trace: &StepTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format: {TRACE_FORMAT_HEADER}");
    let _ = writeln!(out, "steps: {}", trace.steps().len());
    for (index, step) in trace.steps().iter().enumerate() {
        let _ = writeln!(
            out,
            "step {index}: {} [{}] dim: {}",
            step.label,
            step.kind,
            step.matrix.nrows()
        );
        write_rows(&mut out, &step.matrix);
    }
    out
}

fn ordering_line(n_modes: usize) -> String {
    let mut parts = Vec::with_capacity(2 * n_modes);
    for k in 1..=n_modes {
        parts.push(format!("q{k}"));
        parts.push(format!("p{k}"));
    }
    parts.join(" ")
}

fn write_rows(out: &mut String, m: &Mat) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.16e}", m[(i, j)]);
        }
        out.push('\n');
    }
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}
