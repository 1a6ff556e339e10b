//! Covariance-matrix and symplectic algebra shared by the channel models.
//!
//! Quadratures are ordered mode by mode, `(q_1, p_1, q_2, p_2, ...)`, and the
//! vacuum has variance `1/2` in each quadrature.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use serde::Serialize;

use crate::{Error, Result};

/// Quadrature variance of the vacuum.
pub const VACUUM: f64 = 0.5;

/// `|η − 1|` below which a channel is treated as additive noise.
pub const ADDITIVE_EPS: f64 = 1e-9;

/// Slack allowed on eigenvalue positivity and the uncertainty relation.
pub const PSD_TOL: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;

/// Entropy (in bits) of a thermal state with mean occupation `x`.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            expected: "x >= 0",
        });
    }
    Ok(g_unchecked(x))
}

/// `g((x − 1)/2)`: entropy of a mode with symplectic eigenvalue `x/2`.
pub fn h_entropy(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            expected: "x >= 1",
        });
    }
    Ok(g_unchecked((x - 1.0) / 2.0))
}

pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    // x log(1 + 1/x) stays accurate for both tiny and huge x
    (1.0 + x).log2() + x * (1.0 / x).ln_1p() / LN_2
}

pub(crate) fn h_unchecked(x: f64) -> f64 {
    g_unchecked((x - 1.0) / 2.0)
}

/// Standard symplectic form for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Real symmetric covariance matrix of `M` bosonic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadCovariance {
    m: DMatrix<f64>,
}

impl QuadCovariance {
    /// Wraps a matrix after checking shape, finiteness and symmetry.
    ///
    /// The uncertainty relation is checked separately by
    /// [`is_physical`](Self::is_physical) since several callers need to
    /// inspect unphysical intermediates.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::Covariance(format!(
                "expected a square matrix of even dimension, got {r}x{c}"
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Covariance("non-finite entry".into()));
        }
        let scale = m.amax().max(1.0);
        for i in 0..r {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::Covariance(format!(
                        "not symmetric at ({i}, {j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(Self { m })
    }

    /// Vacuum state of `modes` modes.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            m: DMatrix::identity(2 * modes, 2 * modes) * VACUUM,
        }
    }

    /// Single-mode thermal state with mean occupation `nbar`.
    pub fn thermal(nbar: f64) -> Self {
        Self {
            m: DMatrix::identity(2, 2) * (nbar + VACUUM),
        }
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Reduced state on the listed modes, in the given order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() || modes.iter().any(|&k| k >= self.modes()) {
            return Err(Error::Covariance(format!(
                "mode selection {modes:?} invalid for {} modes",
                self.modes()
            )));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let n = idx.len();
        let m = DMatrix::from_fn(n, n, |i, j| self.m[(idx[i], idx[j])]);
        Ok(Self { m })
    }

    /// Symplectic spectrum, sorted in descending order.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(self)
    }

    /// True when every symplectic eigenvalue is at least `1/2`, within
    /// [`PSD_TOL`] scaled by the largest entry. Rounding in the entries of a
    /// strongly squeezed state moves its spectrum by about `ε·|V|²`.
    pub fn is_physical(&self) -> bool {
        let tol = PSD_TOL * self.m.amax().max(1.0);
        self.symplectic_eigenvalues()
            .map(|nu| nu.iter().all(|&x| x >= VACUUM - tol))
            .unwrap_or(false)
    }

    /// Von Neumann entropy in bits.
    ///
    /// `g` has unbounded slope at zero, so excess noise below the rounding
    /// level of the spectrum (`~ε·|V|²`) is treated as vacuum.
    pub fn entropy(&self) -> Result<f64> {
        let floor = 64.0 * f64::EPSILON * self.m.amax().max(1.0).powi(2);
        let nu = self.symplectic_eigenvalues()?;
        Ok(nu
            .iter()
            .map(|&x| x - VACUUM)
            .map(|x| if x < floor { 0.0 } else { g_unchecked(x) })
            .sum())
    }
}

/// Symplectic eigenvalues of `v` (the moduli of the eigenvalues of `iΩV`),
/// sorted in descending order.
///
/// Computed from the real antisymmetric matrix `M = V^{1/2} Ω V^{1/2}`,
/// whose singular values are the symplectic eigenvalues, each repeated.
pub fn symplectic_eigenvalues(v: &QuadCovariance) -> Result<Vec<f64>> {
    let n = v.m.nrows();
    let eig = SymmetricEigen::new(v.m.clone());
    let min = eig.eigenvalues.min();
    if !(min > 0.0) {
        return Err(Error::Covariance(format!(
            "covariance is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_d * eig.eigenvectors.transpose();
    let m = &root * symplectic_form(n / 2) * &root;
    let mtm = m.transpose() * &m;
    let mut sq: Vec<f64> = SymmetricEigen::new(mtm).eigenvalues.iter().copied().collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    Ok(sq.chunks(2).map(|pair| pair[0].max(0.0).sqrt()).collect())
}

/// Checks the single-mode Gaussian channel condition
/// `N + (i/2)(Ω − TΩTᵀ) ≥ 0` (with tolerance [`PSD_TOL`]); the factor
/// `1/2` is the vacuum variance.
///
/// A non-symmetric `n` cannot be a noise matrix and yields `false`.
pub fn validate_channel_pair(t: &Matrix2<f64>, n: &Matrix2<f64>) -> bool {
    if t.iter().chain(n.iter()).any(|x| !x.is_finite()) {
        return false;
    }
    let scale = n.amax().max(1.0);
    if (n[(0, 1)] - n[(1, 0)]).abs() > SYMMETRY_TOL * scale {
        return false;
    }
    // TΩTᵀ = det(T)·Ω for 2×2 matrices, so the matrix is
    // [[n00, n01 + ic], [n01 − ic, n11]] with c = (1 − det T)/2.
    let c = VACUUM * (1.0 - t.determinant());
    let off = 0.5 * (n[(0, 1)] + n[(1, 0)]);
    let mean = 0.5 * (n[(0, 0)] + n[(1, 1)]);
    let half_diff = 0.5 * (n[(0, 0)] - n[(1, 1)]);
    let radius = (half_diff * half_diff + off * off + c * c).sqrt();
    mean - radius >= -PSD_TOL
}

/// Reduces a transmission/noise matrix pair to its `(η, N)` scalars.
pub fn channel_from_matrices(t: &Matrix2<f64>, n: &Matrix2<f64>) -> Result<GaussianChannel> {
    let det_n = n.determinant();
    if det_n < 0.0 {
        // rounding on a rank-deficient noise matrix is tolerated
        if det_n < -PSD_TOL * n.amax().max(1.0).powi(2) {
            return Err(Error::InvalidNoise(det_n));
        }
    }
    if !validate_channel_pair(t, n) {
        return Err(Error::Channel(format!(
            "T = {:?}, N = {:?} violates the uncertainty condition",
            t.as_slice(),
            n.as_slice()
        )));
    }
    // det N loses about ε·|N|² to cancellation when N is strongly squeezed;
    // a pair that passed the check above is at or above the quantum limit
    let eta = t.determinant();
    let noise = det_n.max(0.0).sqrt().max(VACUUM * (1.0 - eta).abs());
    GaussianChannel::new(eta, noise)
}

/// Canonical class of a phase-insensitive single-mode Gaussian channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChannelClass {
    ThermalLoss,
    AdditiveNoise,
    ThermalAmp,
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ThermalLoss => "thermal-loss",
            Self::AdditiveNoise => "additive-noise",
            Self::ThermalAmp => "thermal-amplifier",
        })
    }
}

/// Single-mode phase-insensitive Gaussian channel described by its
/// transmissivity (or gain) `η` and the mixed-in noise `N = √det N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianChannel {
    eta: f64,
    noise: f64,
    class: ChannelClass,
}

impl GaussianChannel {
    pub fn new(eta: f64, noise: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Channel(format!("eta = {eta} must be positive")));
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::Channel(format!("noise = {noise} must be non-negative")));
        }
        let class = if (eta - 1.0).abs() < ADDITIVE_EPS {
            ChannelClass::AdditiveNoise
        } else if eta < 1.0 {
            ChannelClass::ThermalLoss
        } else {
            ChannelClass::ThermalAmp
        };
        if class != ChannelClass::AdditiveNoise {
            if noise < VACUUM * (1.0 - eta).abs() - PSD_TOL {
                return Err(Error::Channel(format!(
                    "noise {noise} is below the quantum limit for eta = {eta}"
                )));
            }
        }
        Ok(Self { eta, noise, class })
    }

    /// Thermal-loss or thermal-amplifier channel with `n̄` environment photons.
    pub fn thermal(eta: f64, nbar: f64) -> Result<Self> {
        Self::new(eta, (nbar + VACUUM) * (1.0 - eta).abs())
    }

    /// Additive-noise channel (`η = 1`).
    pub fn additive(n_add: f64) -> Result<Self> {
        Self::new(1.0, n_add)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `√η`, the amplitude scaling.
    pub fn kappa(&self) -> f64 {
        self.eta.sqrt()
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn class(&self) -> ChannelClass {
        self.class
    }

    /// Mean environment photon number `n̄`; `None` in the additive limit.
    pub fn nbar(&self) -> Option<f64> {
        match self.class {
            ChannelClass::AdditiveNoise => None,
            _ => Some((self.noise / (1.0 - self.eta).abs() - VACUUM).max(0.0)),
        }
    }

    /// Additive noise `N_add`; `None` away from `η = 1`.
    pub fn additive_noise(&self) -> Option<f64> {
        (self.class == ChannelClass::AdditiveNoise).then_some(self.noise)
    }

    /// Isotropic representative `(√η·I, N·I)`.
    pub fn canonical_matrices(&self) -> (Matrix2<f64>, Matrix2<f64>) {
        (
            Matrix2::identity() * self.kappa(),
            Matrix2::identity() * self.noise,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn entropy_values() {
        assert_eq!(g_entropy(0.0).unwrap(), 0.0);
        assert!(close(g_entropy(1.0).unwrap(), 2.0, 1e-15));
        assert!(close(g_entropy(0.1).unwrap(), 0.483_446_685_613_664_633_9, 1e-14));
        assert_eq!(h_entropy(1.0).unwrap(), 0.0);
        assert!(close(h_entropy(3.0).unwrap(), 2.0, 1e-15));
        assert!(close(h_entropy(1.5).unwrap(), 0.902_410_118_609_202_934_8, 1e-14));
        assert!(g_entropy(-0.1).is_err());
        assert!(h_entropy(0.99).is_err());
        assert!(g_entropy(f64::NAN).is_err());
    }

    #[test]
    fn spectrum_of_simple_states() {
        let nu = QuadCovariance::vacuum(2).symplectic_eigenvalues().unwrap();
        assert_eq!(nu.len(), 2);
        assert!(nu.iter().all(|&x| close(x, 0.5, 1e-14)));
        let nu = QuadCovariance::thermal(0.1).symplectic_eigenvalues().unwrap();
        assert!(close(nu[0], 0.6, 1e-14));
    }

    #[test]
    fn rejects_asymmetric_and_odd() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(QuadCovariance::new(m).is_err());
        assert!(QuadCovariance::new(DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn channel_pair_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(validate_channel_pair(&Matrix2::identity(), &Matrix2::zeros()));
        assert!(!validate_channel_pair(&(Matrix2::identity() * h), &Matrix2::zeros()));
        assert!(validate_channel_pair(
            &(Matrix2::identity() * h),
            &(Matrix2::identity() * 0.25)
        ));
        let skew = Matrix2::new(1.0, 0.2, 0.0, 1.0);
        assert!(!validate_channel_pair(&Matrix2::identity(), &skew));
    }

    #[test]
    fn channel_reduction_examples() {
        let ch = channel_from_matrices(&Matrix2::identity(), &(Matrix2::identity() * 0.3)).unwrap();
        assert_eq!(ch.class(), ChannelClass::AdditiveNoise);
        assert!(close(ch.noise(), 0.3, 1e-15));

        let t = Matrix2::new(0.8, 0.0, 0.0, 0.5);
        let n = Matrix2::new(0.4, 0.0, 0.0, 0.9);
        let ch = channel_from_matrices(&t, &n).unwrap();
        assert!(close(ch.eta(), 0.4, 1e-15));
        assert!(close(ch.noise(), 0.6, 1e-15));
        assert_eq!(ch.class(), ChannelClass::ThermalLoss);

        let t = Matrix2::identity() * 2f64.sqrt();
        let ch = channel_from_matrices(&t, &(Matrix2::identity() * 0.5)).unwrap();
        assert!(close(ch.eta(), 2.0, 1e-15));
        assert_eq!(ch.class(), ChannelClass::ThermalAmp);
        assert!(ch.nbar().unwrap().abs() < 1e-15);

        let bad = Matrix2::new(-1.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            channel_from_matrices(&Matrix2::identity(), &bad),
            Err(Error::InvalidNoise(_))
        ));
        assert!(matches!(
            channel_from_matrices(&(Matrix2::identity() * 0.5), &Matrix2::zeros()),
            Err(Error::Channel(_))
        ));
    }
}
