//! Dense real-matrix primitives: phase-space constants, the small closed-form
//! pseudoinverse used by conditioning rules, and symmetric eigenvalue bounds.
//!
//! Everything is `f64`. Quadratures are ordered (q1, p1, ..., qn, pn), and the
//! vacuum variance is normalized to one, so the single-mode vacuum covariance
//! matrix is the 2x2 identity.

use nalgebra as na;

use crate::error::{Error, Result};

/// Dense dynamically-sized real matrix.
pub type Mat = na::DMatrix<f64>;

/// Strict-positivity guard for measured variances and conditioning
/// denominators. Values at or below this are treated as degenerate.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Which quadrature of a mode a homodyne detector reads out.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quadrature {
    /// Position-like quadrature q.
    Q,
    /// Momentum-like quadrature p.
    P,
}

impl Quadrature {
    /// Row of this quadrature inside a mode's 2x2 block (q = 0, p = 1).
    pub fn index(self) -> usize {
        match self {
            Self::Q => 0,
            Self::P => 1,
        }
    }

    /// The conjugate quadrature.
    pub fn conjugate(self) -> Self {
        match self {
            Self::Q => Self::P,
            Self::P => Self::Q,
        }
    }

    /// The 2x2 projector selecting this quadrature.
    pub fn projector(self) -> Mat {
        let mut p = Mat::zeros(2, 2);
        p[(self.index(), self.index())] = 1.0;
        p
    }
}

impl std::fmt::Display for Quadrature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Q => "q",
            Self::P => "p",
        })
    }
}

/// The n-mode symplectic form: a block diagonal of [[0, 1], [-1, 0]].
pub fn symplectic_form(n_modes: usize) -> Result<Mat> {
    if n_modes == 0 {
        return Err(Error::ZeroModes);
    }
    let mut m = Mat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(m)
}

/// Phase-space reflection diag(1, -1), flipping the sign of p.
pub fn reflection() -> Mat {
    Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// The 2x2 permutation [[0, 1], [1, 0]] exchanging q and p.
pub fn swap_qp() -> Mat {
    Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Symplectic matrix of a beam splitter with transmissivity `t` acting on two
/// modes in (q1, p1, q2, p2) ordering. The first output mode carries the
/// transmitted combination sqrt(t) x1 + sqrt(1 - t) x2.
pub fn beam_splitter(t: f64) -> Result<Mat> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidTransmissivity(t));
    }
    let c = t.sqrt();
    let s = (1.0 - t).sqrt();
    #[rustfmt::skip]
    let m = Mat::from_row_slice(4, 4, &[
         c,  0.0,  s,  0.0,
        0.0,  c,  0.0,  s,
        -s,  0.0,  c,  0.0,
        0.0, -s,  0.0,  c,
    ]);
    Ok(m)
}

/// Embed a 4x4 symplectic acting on the last two modes of an
/// (`n_untouched` + 2)-mode system: identity on the first `n_untouched`
/// modes, `s4` on the rest.
pub fn embed_last_two(s4: &Mat, n_untouched: usize) -> Result<Mat> {
    if s4.nrows() != 4 || s4.ncols() != 4 {
        return Err(Error::ShapeMismatch {
            rows: s4.nrows(),
            cols: s4.ncols(),
            expected_rows: 4,
            expected_cols: 4,
        });
    }
    let dim = 2 * n_untouched + 4;
    let mut m = Mat::identity(dim, dim);
    m.view_mut((2 * n_untouched, 2 * n_untouched), (4, 4))
        .copy_from(s4);
    Ok(m)
}

/// Moore-Penrose inverse of the quadrature-projected 2x2 block P b P, in
/// closed form: the rank-one result is the projector divided by the selected
/// diagonal entry. Errors when that entry is not strictly positive, which
/// means `b` was not a valid reduced covariance block.
pub fn projected_pseudoinverse(b: &Mat, quad: Quadrature) -> Result<Mat> {
    if b.nrows() != 2 || b.ncols() != 2 {
        return Err(Error::ShapeMismatch {
            rows: b.nrows(),
            cols: b.ncols(),
            expected_rows: 2,
            expected_cols: 2,
        });
    }
    let d = b[(quad.index(), quad.index())];
    if d <= POSITIVITY_TOL {
        return Err(Error::NonPositiveVariance { quad, value: d });
    }
    Ok(quad.projector() / d)
}

/// Smallest eigenvalue of a real symmetric matrix. Asymmetry below roundoff
/// is tolerated; the input is symmetrized before factorization.
pub fn min_symmetric_eigenvalue(m: &Mat) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::ZeroModes);
    }
    let eig = na::SymmetricEigen::new(symmetrized(m.clone()));
    Ok(eig.eigenvalues.min())
}

/// Smallest eigenvalue of the Hermitian matrix `re` + i `im`, obtained from
/// the real symmetric embedding [[re, -im], [im, re]] of doubled dimension,
/// whose spectrum repeats each Hermitian eigenvalue twice. Requires `re`
/// symmetric and `im` antisymmetric up to roundoff.
pub fn min_hermitian_eigenvalue(re: &Mat, im: &Mat) -> Result<f64> {
    let d = re.nrows();
    if re.ncols() != d {
        return Err(Error::NonSquare {
            rows: re.nrows(),
            cols: re.ncols(),
        });
    }
    if im.nrows() != d || im.ncols() != d {
        return Err(Error::ShapeMismatch {
            rows: im.nrows(),
            cols: im.ncols(),
            expected_rows: d,
            expected_cols: d,
        });
    }
    let mut e = Mat::zeros(2 * d, 2 * d);
    e.view_mut((0, 0), (d, d)).copy_from(re);
    e.view_mut((d, d), (d, d)).copy_from(re);
    e.view_mut((0, d), (d, d)).copy_from(&(-im));
    e.view_mut((d, 0), (d, d)).copy_from(im);
    min_symmetric_eigenvalue(&e)
}

/// Exact symmetrization (m + m^T) / 2.
pub fn symmetrized(m: Mat) -> Mat {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Largest absolute entry; zero for an empty matrix.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest absolute asymmetry max |m_ij - m_ji|.
pub fn symmetry_defect(m: &Mat) -> f64 {
    let mut defect = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    defect
}

/// Entrywise deviation of `a` from the reference `b`, scaled by the
/// reference magnitude: max |a - b| / max(1, max |b|). The unit floor keeps
/// the measure meaningful when the reference is small or exactly zero.
pub fn scaled_deviation(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "deviation needs equal shapes");
    max_abs(&(a - b)) / max_abs(b).max(1.0)
}

/// True when every entry is finite.
pub fn all_finite(m: &Mat) -> bool {
    m.iter().all(|x| x.is_finite())
}
