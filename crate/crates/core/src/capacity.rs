//! Quantum-capacity bounds of single-mode Gaussian channels and the reverse
//! coherent information of two-mode states.
//!
//! All bounds are in qubits per channel use and are clamped at zero. The
//! unclamped lower bound is exposed as [`q_lb_raw`] for optimizers.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::gaussian::{g_unchecked, h_unchecked, ChannelClass, GaussianChannel, QuadCovariance};
use crate::params::Direction;
use crate::{Error, Result};

/// Default ceiling used when reporting divergent rates.
pub const RATE_CAP: f64 = 60.0;

/// Hashing-type lower bound without the `max[·, 0]` clamp.
///
/// Can be `+∞` (noiseless identity) or `−∞`.
pub fn q_lb_raw(ch: &GaussianChannel) -> f64 {
    let eta = ch.eta();
    match (ch.class(), ch.nbar()) {
        (ChannelClass::AdditiveNoise, _) | (_, None) => -ch.noise().log2() - 1.0 / LN_2,
        (_, Some(nbar)) => (eta / (1.0 - eta).abs()).log2() - g_unchecked(nbar),
    }
}

/// Coherent-information lower bound `Q_LB`.
pub fn q_lb(ch: &GaussianChannel) -> f64 {
    q_lb_raw(ch).max(0.0)
}

/// Two-way assisted (PLOB) upper bound.
pub fn q_plob(ch: &GaussianChannel) -> f64 {
    let eta = ch.eta();
    let value = match (ch.class(), ch.nbar()) {
        (ChannelClass::ThermalLoss, Some(nbar)) => {
            -((1.0 - eta).log2() + nbar * eta.log2()) - g_unchecked(nbar)
        }
        (ChannelClass::ThermalAmp, Some(nbar)) => {
            (nbar + 1.0) * eta.log2() - (eta - 1.0).log2() - g_unchecked(nbar)
        }
        _ => {
            let n = ch.noise();
            -n.log2() - 1.0 / LN_2 + n / LN_2
        }
    };
    value.max(0.0)
}

/// Degradable-extension upper bound.
///
/// For a quantum-limited amplifier (`η > 1`, `n̄ = 0`) the expression
/// diverges and `+∞` is returned so that [`q_ub`] falls back to PLOB.
pub fn q_de(ch: &GaussianChannel) -> f64 {
    let eta = ch.eta();
    let value = match (ch.class(), ch.nbar()) {
        (ChannelClass::ThermalLoss, Some(nbar)) => {
            let m = 2.0 * nbar + 1.0;
            (eta / (1.0 - eta)).log2() + h_unchecked((1.0 - eta) * m + eta)
                - h_unchecked(eta * m + 1.0 - eta)
        }
        (ChannelClass::ThermalAmp, Some(nbar)) => {
            if nbar <= 0.0 {
                return f64::INFINITY;
            }
            let x = (eta - 1.0) * nbar;
            -x.log2() - 1.0 / LN_2 + 2.0 * h_unchecked((1.0 + x * x).sqrt())
        }
        _ => {
            let n = ch.noise();
            -n.log2() - 1.0 / LN_2 + 2.0 * h_unchecked((1.0 + n * n).sqrt())
        }
    };
    value.max(0.0)
}

/// `min(Q_PLOB, Q_DE)`.
pub fn q_ub(ch: &GaussianChannel) -> f64 {
    q_plob(ch).min(q_de(ch))
}

/// Lower and upper capacity bounds, with the optional RCI of the resource
/// state that generated the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateBounds {
    pub lower: f64,
    pub upper: f64,
    pub rci: Option<f64>,
}

impl RateBounds {
    pub fn of(ch: &GaussianChannel) -> Self {
        Self {
            lower: q_lb(ch),
            upper: q_ub(ch),
            rci: None,
        }
    }

    pub fn with_rci(mut self, rci: f64) -> Self {
        self.rci = Some(rci);
        self
    }
}

/// Index of the microwave mode in two-mode covariances.
pub const MICROWAVE_MODE: usize = 0;
/// Index of the optical mode in two-mode covariances.
pub const OPTICAL_MODE: usize = 1;

/// Reverse coherent information of a microwave-optical state.
///
/// `v` is ordered `(microwave, optical)`. For `m→o` the receiver marginal
/// is the optical mode: `RCI = H(ρ_o) − H(ρ_om)`; for `o→m` it is the
/// microwave mode.
pub fn rci_from_covariance(v: &QuadCovariance, direction: Direction) -> Result<f64> {
    if v.modes() != 2 {
        return Err(Error::Covariance(format!(
            "expected a two-mode covariance, got {} modes",
            v.modes()
        )));
    }
    if !v.is_physical() {
        return Err(Error::Covariance("violates the uncertainty relation".into()));
    }
    let receiver = match direction {
        Direction::MicrowaveToOptical => OPTICAL_MODE,
        Direction::OpticalToMicrowave => MICROWAVE_MODE,
    };
    Ok(v.reduced(&[receiver])?.entropy()? - v.entropy()?)
}

/// RCI of the pure two-mode state generated at unit extraction efficiency.
pub fn rci_closed_form(coop: f64, squeezing: f64) -> Result<f64> {
    if !(coop >= 0.0) {
        return Err(Error::Domain {
            name: "C_g",
            value: coop,
            expected: "C_g >= 0",
        });
    }
    if !(squeezing >= 0.0) {
        return Err(Error::Domain {
            name: "C_v",
            value: squeezing,
            expected: "C_v >= 0",
        });
    }
    if !(1.0 - coop - 2.0 * squeezing.sqrt() > 0.0) {
        return Err(Error::Unstable(format!(
            "1 - C_g - 2 sqrt(C_v) <= 0 at C_g = {coop}, C_v = {squeezing}"
        )));
    }
    let den = (1.0 - coop).powi(2) - 4.0 * squeezing;
    let s = (0.25 + 4.0 * coop * (1.0 + coop).powi(2) / (den * den)).sqrt();
    Ok(g_unchecked(s - 0.5))
}
