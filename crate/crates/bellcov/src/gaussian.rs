//! Covariance matrices of n-mode Gaussian states: construction, validation
//! against the uncertainty principle, and the block bookkeeping detections
//! need.
//!
//! A state is physical (bona fide) exactly when V + i Omega >= 0, checked
//! here through the smallest eigenvalue of that Hermitian matrix. Validation
//! is explicit and separate from construction: [`CovarianceMatrix::new`] only
//! enforces shape, finiteness, and symmetry, so conditional-state formulas
//! can be exercised on any well-formed matrix while physicality remains a
//! deliberate, reportable check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::{self, Mat};

/// Acceptance margin for the bona fide test: the smallest eigenvalue of
/// V + i Omega may undershoot zero by this much before the state is flagged.
pub const BONA_FIDE_TOL: f64 = 1e-9;

/// Detector quantum efficiency, restricted to (0, 1].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Efficiency(f64);

impl Efficiency {
    /// Wrap an efficiency, rejecting values outside (0, 1].
    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta <= 1.0 {
            Ok(Self(eta))
        } else {
            Err(Error::InvalidEfficiency(eta))
        }
    }

    /// Unit efficiency: an ideal detector.
    pub fn perfect() -> Self {
        Self(1.0)
    }

    /// The raw efficiency value.
    pub fn value(self) -> f64 {
        self.0
    }

    /// Equivalent noise variance (1 - eta) / eta added to the measured
    /// quadrature, referred to the detector input. Exactly zero at eta = 1.
    pub fn noise_shift(self) -> f64 {
        (1.0 - self.0) / self.0
    }
}

impl Default for Efficiency {
    fn default() -> Self {
        Self::perfect()
    }
}

/// Outcome of the bona fide check on a covariance matrix.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Largest absolute asymmetry of the raw input.
    pub symmetry_defect: f64,
    /// Smallest eigenvalue of V + i Omega.
    pub min_uncertainty_eigenvalue: f64,
    /// Whether the eigenvalue clears -[`BONA_FIDE_TOL`].
    pub bona_fide: bool,
}

/// Blocks of an (n + 2)-mode covariance matrix split into n surviving modes
/// and the two modes about to be measured:
///
/// ```text
///        [ a    c1   c2  ]
///  V  =  [ c1^T b1   d   ]
///        [ c2^T d^T  b2  ]
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition {
    /// 2n x 2n block of the surviving modes.
    pub a: Mat,
    /// 2n x 2 correlations with the next-to-last mode.
    pub c1: Mat,
    /// 2n x 2 correlations with the last mode.
    pub c2: Mat,
    /// 2 x 2 block of the next-to-last mode.
    pub b1: Mat,
    /// 2 x 2 block of the last mode.
    pub b2: Mat,
    /// 2 x 2 cross-correlations between the two measured modes.
    pub d: Mat,
}

impl BlockPartition {
    /// Number of surviving modes.
    pub fn surviving_modes(&self) -> usize {
        self.a.nrows() / 2
    }

    /// Rebuild the full matrix from the blocks.
    pub fn reassemble(&self) -> Mat {
        let s = self.a.nrows();
        let dim = s + 4;
        let mut m = Mat::zeros(dim, dim);
        m.view_mut((0, 0), (s, s)).copy_from(&self.a);
        m.view_mut((0, s), (s, 2)).copy_from(&self.c1);
        m.view_mut((0, s + 2), (s, 2)).copy_from(&self.c2);
        m.view_mut((s, 0), (2, s)).copy_from(&self.c1.transpose());
        m.view_mut((s + 2, 0), (2, s)).copy_from(&self.c2.transpose());
        m.view_mut((s, s), (2, 2)).copy_from(&self.b1);
        m.view_mut((s, s + 2), (2, 2)).copy_from(&self.d);
        m.view_mut((s + 2, s), (2, 2)).copy_from(&self.d.transpose());
        m.view_mut((s + 2, s + 2), (2, 2)).copy_from(&self.b2);
        m
    }
}

/// Split of an (n + 1)-mode covariance matrix into n surviving modes and the
/// single last mode.
#[derive(Clone, Debug, PartialEq)]
pub struct LastModeSplit {
    /// 2n x 2n block of the surviving modes.
    pub a: Mat,
    /// 2n x 2 correlations with the last mode.
    pub c: Mat,
    /// 2 x 2 block of the last mode.
    pub b: Mat,
}

/// Symmetric 2n x 2n covariance matrix of an n-mode Gaussian state, in
/// (q1, p1, ..., qn, pn) ordering with the vacuum normalized to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: Mat,
}

impl CovarianceMatrix {
    /// Wrap a matrix after checking it is square, of even nonzero dimension,
    /// and finite. The entries are symmetrized; asymmetry beyond roundoff is
    /// the caller's bug and shows up in [`validate`](Self::validate).
    pub fn new(entries: Mat) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim {
            return Err(Error::NonSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if dim == 0 {
            return Err(Error::ZeroModes);
        }
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension { dim });
        }
        if !mat::all_finite(&entries) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            n_modes: dim / 2,
            entries: mat::symmetrized(entries),
        })
    }

    /// The n-mode vacuum: the identity matrix.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            n_modes,
            entries: Mat::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Two-mode squeezed vacuum with quadrature variance `mu` >= 1:
    ///
    /// ```text
    ///  [ mu I        sqrt(mu^2-1) Z ]        Z = diag(1, -1)
    ///  [ sqrt(mu^2-1) Z        mu I ]
    /// ```
    ///
    /// At mu = 1 this is the two-mode vacuum; correlations grow with mu and
    /// the state stays pure (the smallest eigenvalue of V + i Omega is zero).
    pub fn epr(mu: f64) -> Result<Self> {
        if mu < 1.0 || !mu.is_finite() {
            return Err(Error::EprParameter(mu));
        }
        let off = (mu * mu - 1.0).sqrt();
        #[rustfmt::skip]
        let entries = Mat::from_row_slice(4, 4, &[
             mu, 0.0,  off, 0.0,
            0.0,  mu,  0.0, -off,
            off, 0.0,   mu, 0.0,
            0.0, -off, 0.0,  mu,
        ]);
        Ok(Self {
            n_modes: 2,
            entries,
        })
    }

    /// Seeded pseudo-random physical state: thermal variances in [1, 3] on
    /// each mode, conjugated by [`random_symplectic`]. Identical seeds give
    /// identical matrices on every platform.
    pub fn random(n_modes: usize, seed: u64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_symplectic_with(&mut rng, n_modes);
        let mut thermal = Mat::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            let nu = rng.random_range(1.0..=3.0);
            thermal[(2 * k, 2 * k)] = nu;
            thermal[(2 * k + 1, 2 * k + 1)] = nu;
        }
        Ok(Self {
            n_modes,
            entries: mat::symmetrized(&s * thermal * s.transpose()),
        })
    }

    /// Number of modes n.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Matrix dimension 2n.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &Mat {
        &self.entries
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> Mat {
        self.entries
    }

    /// Bona fide check. Construction guarantees the shape invariants, so
    /// this never fails; the report says whether V + i Omega >= 0 holds.
    pub fn validate(&self) -> ValidationReport {
        let omega =
            mat::symplectic_form(self.n_modes).expect("mode count is nonzero by construction");
        let min = mat::min_hermitian_eigenvalue(&self.entries, &omega)
            .expect("dimensions agree by construction");
        ValidationReport {
            symmetry_defect: mat::symmetry_defect(&self.entries),
            min_uncertainty_eigenvalue: min,
            bona_fide: min >= -BONA_FIDE_TOL,
        }
    }

    /// Split off the blocks of the last two modes. Needs n >= 3 so that at
    /// least one mode survives the measurement.
    pub fn partition(&self) -> Result<BlockPartition> {
        if self.n_modes < 3 {
            return Err(Error::InsufficientModes {
                got: self.n_modes,
                need: 3,
            });
        }
        let s = 2 * (self.n_modes - 2);
        let m = &self.entries;
        Ok(BlockPartition {
            a: m.view((0, 0), (s, s)).into_owned(),
            c1: m.view((0, s), (s, 2)).into_owned(),
            c2: m.view((0, s + 2), (s, 2)).into_owned(),
            b1: m.view((s, s), (2, 2)).into_owned(),
            b2: m.view((s + 2, s + 2), (2, 2)).into_owned(),
            d: m.view((s, s + 2), (2, 2)).into_owned(),
        })
    }

    /// Split off the blocks of the last mode. Needs n >= 2.
    pub fn split_last_mode(&self) -> Result<LastModeSplit> {
        if self.n_modes < 2 {
            return Err(Error::InsufficientModes {
                got: self.n_modes,
                need: 2,
            });
        }
        let s = 2 * (self.n_modes - 1);
        let m = &self.entries;
        Ok(LastModeSplit {
            a: m.view((0, 0), (s, s)).into_owned(),
            c: m.view((0, s), (s, 2)).into_owned(),
            b: m.view((s, s), (2, 2)).into_owned(),
        })
    }

    /// Direct sum: `self` on the first modes, `other` on the rest, no
    /// correlations between them.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d1 = self.dim();
        let d2 = other.dim();
        let mut m = Mat::zeros(d1 + d2, d1 + d2);
        m.view_mut((0, 0), (d1, d1)).copy_from(&self.entries);
        m.view_mut((d1, d1), (d2, d2)).copy_from(&other.entries);
        Self {
            n_modes: self.n_modes + other.n_modes,
            entries: m,
        }
    }

    /// Append one vacuum mode after the existing ones.
    pub fn append_vacuum_mode(&self) -> Self {
        let d = self.dim();
        let mut m = Mat::identity(d + 2, d + 2);
        m.view_mut((0, 0), (d, d)).copy_from(&self.entries);
        Self {
            n_modes: self.n_modes + 1,
            entries: m,
        }
    }

    /// Reorder modes so that output mode i is input mode `perm[i]`. Use this
    /// to move the modes to be measured into the trailing positions that the
    /// detection functions act on.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_modes;
        let mut seen = vec![false; n];
        let valid = perm.len() == n
            && perm
                .iter()
                .all(|&src| src < n && !std::mem::replace(&mut seen[src], true));
        if !valid {
            return Err(Error::InvalidPermutation(perm.to_vec(), n));
        }
        let dim = self.dim();
        let mut p = Mat::zeros(dim, dim);
        for (i, &src) in perm.iter().enumerate() {
            p[(2 * i, 2 * src)] = 1.0;
            p[(2 * i + 1, 2 * src + 1)] = 1.0;
        }
        Ok(Self {
            n_modes: n,
            entries: mat::symmetrized(&p * &self.entries * p.transpose()),
        })
    }
}

/// Validate a raw matrix as a covariance matrix: shape errors are reported
/// as errors, physicality as the report's verdict. The symmetry defect is
/// measured on the input as given, before any symmetrization.
pub fn validate_matrix(m: &Mat) -> Result<ValidationReport> {
    let defect = mat::symmetry_defect(m);
    let cm = CovarianceMatrix::new(m.clone())?;
    let report = cm.validate();
    Ok(ValidationReport {
        symmetry_defect: defect,
        ..report
    })
}

/// Seeded pseudo-random n-mode symplectic matrix, composed from single-mode
/// phase rotations, single-mode squeezers, and nearest-neighbor beam
/// splitters. The rotations matter: without them no q-p cross-correlations
/// ever appear, and large parts of the detection formulas would go untested.
pub fn random_symplectic(n_modes: usize, seed: u64) -> Result<Mat> {
    if n_modes == 0 {
        return Err(Error::ZeroModes);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_symplectic_with(&mut rng, n_modes))
}

fn random_symplectic_with(rng: &mut ChaCha8Rng, n_modes: usize) -> Mat {
    let dim = 2 * n_modes;
    let mut s = Mat::identity(dim, dim);
    for _ in 0..2 {
        for k in 0..n_modes {
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            s = embed_single(&rotation(phi), k, n_modes) * s;
        }
        for k in 0..n_modes {
            let r = rng.random_range(-1.0..=1.0);
            s = embed_single(&squeezer(r), k, n_modes) * s;
        }
        for k in 0..n_modes.saturating_sub(1) {
            let t = rng.random_range(0.0..=1.0);
            let bs = mat::beam_splitter(t).expect("sampled transmissivity is in range");
            s = embed_pair(&bs, k, n_modes) * s;
        }
    }
    for k in 0..n_modes {
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        s = embed_single(&rotation(phi), k, n_modes) * s;
    }
    s
}

fn rotation(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    Mat::from_row_slice(2, 2, &[c, s, -s, c])
}

fn squeezer(r: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()])
}

fn embed_single(block: &Mat, mode: usize, n_modes: usize) -> Mat {
    let dim = 2 * n_modes;
    let mut m = Mat::identity(dim, dim);
    m.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(block);
    m
}

fn embed_pair(block: &Mat, first_mode: usize, n_modes: usize) -> Mat {
    let dim = 2 * n_modes;
    let mut m = Mat::identity(dim, dim);
    m.view_mut((2 * first_mode, 2 * first_mode), (4, 4))
        .copy_from(block);
    m
}
