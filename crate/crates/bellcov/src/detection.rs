//! Closed-form conditional covariance matrices after quadrature detections.
//!
//! All detections act on the trailing modes of the state; use
//! [`CovarianceMatrix::permute_modes`] first if other modes are measured.
//! Three schemes are covered:
//!
//! - [`homodyne`]: one quadrature of the last mode is read out;
//! - [`bell_like`]: the last two modes interfere on a beam splitter of
//!   transmissivity `t`, after which the last output is homodyned in q and
//!   the other in p. [`standard_bell`] is the balanced case t = 1/2,
//!   computed through an independently simplified route;
//! - [`heterodyne`]: the last mode is split on a balanced beam splitter with
//!   vacuum and both outputs are homodyned in conjugate quadratures, which
//!   is the same as projecting onto a coherent state.
//!
//! Detector inefficiency eta < 1 enters every rule the same way: the
//! measured variance picks up the equivalent noise (1 - eta) / eta. At
//! eta = 1 the added term is exactly zero, so the ideal path is not a
//! special case but the same arithmetic.
//!
//! The update rules are Schur-type complements: measuring can only shrink
//! the surviving block, and the outcome never enters the covariance. Every
//! result is certified against the stepwise pipeline in [`crate::oracle`]
//! by the test suite.

use crate::error::{Error, Result};
use crate::gaussian::{BlockPartition, CovarianceMatrix, Efficiency};
use crate::mat::{self, Mat, Quadrature, POSITIVITY_TOL};

/// The three scalars that summarize the measured two-mode block after the
/// beam splitter: the q variance of the last output (`gamma1`), the p
/// variance of the other output (`gamma2`), and their cross-correlation
/// (`gamma3`). Together they form the effective measured matrix
/// gamma = [[gamma1, gamma3], [gamma3, gamma2]].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GammaMatrix {
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
}

impl GammaMatrix {
    /// q variance of the reflected-arm output (the mode homodyned in q).
    pub fn gamma1(self) -> f64 {
        self.gamma1
    }

    /// p variance of the transmitted-arm output (the mode homodyned in p).
    pub fn gamma2(self) -> f64 {
        self.gamma2
    }

    /// Cross-correlation between the two measured quadratures.
    pub fn gamma3(self) -> f64 {
        self.gamma3
    }

    /// Fold detector efficiencies into the measured variances: `eta` for the
    /// q detector, `eta_prime` for the p detector. The cross term is
    /// untouched because the two noise sources are independent.
    pub fn shifted(self, eta: Efficiency, eta_prime: Efficiency) -> Self {
        Self {
            gamma1: self.gamma1 + eta.noise_shift(),
            gamma2: self.gamma2 + eta_prime.noise_shift(),
            gamma3: self.gamma3,
        }
    }

    /// Determinant gamma1 gamma2 - gamma3^2.
    pub fn det(self) -> f64 {
        self.gamma1 * self.gamma2 - self.gamma3 * self.gamma3
    }

    /// The 2x2 matrix [[gamma1, gamma3], [gamma3, gamma2]].
    pub fn as_matrix(self) -> Mat {
        Mat::from_row_slice(
            2,
            2,
            &[self.gamma1, self.gamma3, self.gamma3, self.gamma2],
        )
    }
}

/// The three 2x2 kernels that weight the correlation blocks in the
/// bell-like update rule; `k21` is the transpose of `k12`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaSet {
    /// Kernel for c1 (.) c1^T.
    pub k11: Mat,
    /// Kernel for c2 (.) c2^T.
    pub k22: Mat,
    /// Kernel for c1 (.) c2^T.
    pub k12: Mat,
}

impl KappaSet {
    /// Kernel for c2 (.) c1^T.
    pub fn k21(&self) -> Mat {
        self.k12.transpose()
    }
}

/// Which detection a [`DetectionSpec`] applies.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DetectionKind {
    /// q homodyne of the last mode.
    HomodyneQ,
    /// p homodyne of the last mode.
    HomodyneP,
    /// Beam splitter of free transmissivity plus conjugate homodynes on the
    /// last two modes.
    BellLike,
    /// The balanced bell-like detection, through its own reduced formula.
    StandardBell,
    /// Coherent-state projection of the last mode.
    Heterodyne,
}

/// A validated detection request: kind, optional transmissivity (bell-like
/// only), and the two detector efficiencies. For single-quadrature
/// detections only `eta` is read.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DetectionSpec {
    kind: DetectionKind,
    transmissivity: Option<f64>,
    eta: Efficiency,
    eta_prime: Efficiency,
}

impl DetectionSpec {
    /// Build a request. A transmissivity may only accompany
    /// [`DetectionKind::BellLike`], where it defaults to 1/2 when absent.
    pub fn new(
        kind: DetectionKind,
        transmissivity: Option<f64>,
        eta: Efficiency,
        eta_prime: Efficiency,
    ) -> Result<Self> {
        let transmissivity = match (kind, transmissivity) {
            (DetectionKind::BellLike, t) => {
                let t = t.unwrap_or(0.5);
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidTransmissivity(t));
                }
                Some(t)
            }
            (_, None) => None,
            (_, Some(_)) => return Err(Error::TransmissivityNotApplicable),
        };
        Ok(Self {
            kind,
            transmissivity,
            eta,
            eta_prime,
        })
    }

    /// The detection kind.
    pub fn kind(self) -> DetectionKind {
        self.kind
    }

    /// The beam-splitter transmissivity, present exactly for bell-like.
    pub fn transmissivity(self) -> Option<f64> {
        self.transmissivity
    }

    /// Efficiency of the q detector (or the single detector).
    pub fn eta(self) -> Efficiency {
        self.eta
    }

    /// Efficiency of the p detector.
    pub fn eta_prime(self) -> Efficiency {
        self.eta_prime
    }

    /// Run the detection on `v`.
    pub fn apply(self, v: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        match self.kind {
            DetectionKind::HomodyneQ => homodyne(v, Quadrature::Q, self.eta),
            DetectionKind::HomodyneP => homodyne(v, Quadrature::P, self.eta),
            DetectionKind::BellLike => bell_like(
                v,
                self.transmissivity.expect("set at construction"),
                self.eta,
                self.eta_prime,
            ),
            DetectionKind::StandardBell => standard_bell(v, self.eta, self.eta_prime),
            DetectionKind::Heterodyne => heterodyne(v, self.eta, self.eta_prime),
        }
    }
}

/// Homodyne detection of one quadrature of the last mode with efficiency
/// `eta`. The surviving modes end up in
///
/// ```text
///   a  -  c (P b_eff P)^+ c^T
/// ```
///
/// where P projects onto the measured quadrature, b_eff is the last mode's
/// block with the efficiency noise added to the measured variance, and ^+ is
/// the (closed-form) Moore-Penrose inverse of the projected block.
pub fn homodyne(v: &CovarianceMatrix, quad: Quadrature, eta: Efficiency) -> Result<CovarianceMatrix> {
    let split = v.split_last_mode()?;
    let raw = split.b[(quad.index(), quad.index())];
    if raw <= POSITIVITY_TOL {
        return Err(Error::NonPositiveVariance { quad, value: raw });
    }
    let mut b_eff = split.b.clone();
    b_eff[(quad.index(), quad.index())] += eta.noise_shift();
    let pinv = mat::projected_pseudoinverse(&b_eff, quad)?;
    CovarianceMatrix::new(&split.a - &split.c * pinv * split.c.transpose())
}

/// Effective measured matrix of the bell-like scheme: propagate the last
/// two modes through the beam splitter of transmissivity `t` and keep the
/// entries that the two homodynes actually read out.
pub fn gamma_matrix(p: &BlockPartition, t: f64) -> Result<GammaMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidTransmissivity(t));
    }
    let root = (t * (1.0 - t)).sqrt();
    let (b1, b2, d) = (&p.b1, &p.b2, &p.d);
    Ok(GammaMatrix {
        gamma1: (1.0 - t) * b1[(0, 0)] + t * b2[(0, 0)] - 2.0 * root * d[(0, 0)],
        gamma2: t * b1[(1, 1)] + (1.0 - t) * b2[(1, 1)] + 2.0 * root * d[(1, 1)],
        gamma3: root * (b2[(0, 1)] - b1[(0, 1)]) - (1.0 - t) * d[(0, 1)] + t * d[(1, 0)],
    })
}

/// The 2x2 kernels combining gamma with the beam-splitter amplitudes.
pub fn kappa_matrices(g: GammaMatrix, t: f64) -> Result<KappaSet> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidTransmissivity(t));
    }
    let root = (t * (1.0 - t)).sqrt();
    let (g1, g2, g3) = (g.gamma1(), g.gamma2(), g.gamma3());
    #[rustfmt::skip]
    let k11 = Mat::from_row_slice(2, 2, &[
        (1.0 - t) * g2, root * g3,
        root * g3,      t * g1,
    ]);
    #[rustfmt::skip]
    let k22 = Mat::from_row_slice(2, 2, &[
        t * g2,     -root * g3,
        -root * g3, (1.0 - t) * g1,
    ]);
    #[rustfmt::skip]
    let k12 = Mat::from_row_slice(2, 2, &[
        -root * g2, (1.0 - t) * g3,
        -t * g3,    root * g1,
    ]);
    Ok(KappaSet { k11, k22, k12 })
}

fn checked_det(g: GammaMatrix) -> Result<f64> {
    if g.gamma1() <= POSITIVITY_TOL {
        return Err(Error::DegenerateMeasuredBlock {
            condition: "gamma1",
            value: g.gamma1(),
        });
    }
    let det = g.det();
    if det <= POSITIVITY_TOL {
        return Err(Error::DegenerateMeasuredBlock {
            condition: "det gamma",
            value: det,
        });
    }
    Ok(det)
}

/// Bell-like detection: the last two modes interfere on a beam splitter of
/// transmissivity `t`, the last output is homodyned in q (efficiency `eta`)
/// and the next-to-last in p (efficiency `eta_prime`). The surviving modes
/// end up in
///
/// ```text
///   a - (c1 K11 c1^T + c2 K22 c2^T + c1 K12 c2^T + c2 K12^T c1^T) / det gamma
/// ```
///
/// with the kernels of [`kappa_matrices`] built from the efficiency-shifted
/// gamma. Needs at least three modes; errors with
/// [`Error::DegenerateMeasuredBlock`] when the shifted gamma is not positive
/// definite, which cannot happen for a bona fide input.
pub fn bell_like(
    v: &CovarianceMatrix,
    t: f64,
    eta: Efficiency,
    eta_prime: Efficiency,
) -> Result<CovarianceMatrix> {
    let p = v.partition()?;
    let g = gamma_matrix(&p, t)?.shifted(eta, eta_prime);
    let det = checked_det(g)?;
    let k = kappa_matrices(g, t)?;
    let cross = &p.c1 * &k.k12 * p.c2.transpose();
    let corr =
        (&p.c1 * &k.k11 * p.c1.transpose() + &p.c2 * &k.k22 * p.c2.transpose() + &cross
            + cross.transpose())
            / det;
    CovarianceMatrix::new(&p.a - corr)
}

/// The balanced bell-like detection (t = 1/2), through the reduced form
///
/// ```text
///   gamma = (Z b1 Z + b2 - Z d - d^T Z) / 2 + diag(noise, noise')
///   a - sum_ij c_i (X_i^T gamma X_j) c_j^T / (2 det gamma)
/// ```
///
/// with X1 the q-p swap and X2 the single-mode symplectic form. This is a
/// genuinely different evaluation route from [`bell_like`] at t = 1/2; the
/// two are held to agree by the test suite.
pub fn standard_bell(
    v: &CovarianceMatrix,
    eta: Efficiency,
    eta_prime: Efficiency,
) -> Result<CovarianceMatrix> {
    let p = v.partition()?;
    let z = mat::reflection();
    let gamma_mat = mat::symmetrized(
        (&z * &p.b1 * &z + &p.b2 - &z * &p.d - p.d.transpose() * &z) * 0.5,
    );
    let g = GammaMatrix {
        gamma1: gamma_mat[(0, 0)] + eta.noise_shift(),
        gamma2: gamma_mat[(1, 1)] + eta_prime.noise_shift(),
        gamma3: gamma_mat[(0, 1)],
    };
    let det = checked_det(g)?;
    let gm = g.as_matrix();
    let x = [mat::swap_qp(), mat::symplectic_form(1)?];
    let c = [&p.c1, &p.c2];
    let mut corr = Mat::zeros(p.a.nrows(), p.a.ncols());
    for i in 0..2 {
        for j in 0..2 {
            corr += c[i] * (x[i].transpose() * &gm * &x[j]) * c[j].transpose();
        }
    }
    CovarianceMatrix::new(&p.a - corr / (2.0 * det))
}

/// Heterodyne detection of the last mode: both quadratures are read out at
/// once by splitting the mode with vacuum on a balanced beam splitter. The
/// surviving modes end up in
///
/// ```text
///   a - c [Omega (b + 2 Phi) Omega^T + I] c^T / theta
/// ```
///
/// where Phi = diag(noise, noise') carries the two detector efficiencies and
/// theta = det b + tr b + 1 plus the efficiency corrections. Works on any
/// state with at least two modes.
pub fn heterodyne(
    v: &CovarianceMatrix,
    eta: Efficiency,
    eta_prime: Efficiency,
) -> Result<CovarianceMatrix> {
    let split = v.split_last_mode()?;
    let b = &split.b;
    let phi1 = eta.noise_shift();
    let phi2 = eta_prime.noise_shift();

    let gamma1 = 0.5 * (b[(0, 0)] + 1.0) + phi1;
    if gamma1 <= POSITIVITY_TOL {
        return Err(Error::DegenerateMeasuredBlock {
            condition: "gamma1",
            value: gamma1,
        });
    }
    let det_b = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    let theta = det_b
        + b[(0, 0)]
        + b[(1, 1)]
        + 1.0
        + 4.0 * phi1 * phi2
        + 2.0 * (phi1 + phi2)
        + 2.0 * (phi2 * b[(0, 0)] + phi1 * b[(1, 1)]);
    if theta <= POSITIVITY_TOL {
        return Err(Error::DegenerateMeasuredBlock {
            condition: "theta",
            value: theta,
        });
    }

    let omega = mat::symplectic_form(1)?;
    let phi = Mat::from_row_slice(2, 2, &[phi1, 0.0, 0.0, phi2]);
    let bracket = &omega * (b + 2.0 * phi) * omega.transpose() + Mat::identity(2, 2);
    let corr = (&split.c * bracket * split.c.transpose()) / theta;
    CovarianceMatrix::new(&split.a - corr)
}

/// Covariance matrix of the remote single-mode state prepared by homodyning
/// one arm of a two-mode squeezed state of parameter `mu` with efficiency
/// `eta`. Detecting q squeezes the remote q below the vacuum (fully, to
/// 1/mu, at eta = 1; not at all at eta = 1/2); detecting p squeezes p. The
/// conjugate quadrature always keeps the thermal variance mu.
pub fn remote_state_prep(mu: f64, quad: Quadrature, eta: Efficiency) -> Result<CovarianceMatrix> {
    if mu < 1.0 || !mu.is_finite() {
        return Err(Error::EprParameter(mu));
    }
    let e = eta.value();
    let conditioned = (e + (1.0 - e) * mu) / (e * mu + 1.0 - e);
    let (vq, vp) = match quad {
        Quadrature::Q => (conditioned, mu),
        Quadrature::P => (mu, conditioned),
    };
    CovarianceMatrix::new(Mat::from_row_slice(2, 2, &[vq, 0.0, 0.0, vp]))
}
