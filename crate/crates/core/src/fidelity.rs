//! Fidelity of coherent and cat states sent through Gaussian channels.
//!
//! The closed forms assume an isotropic channel `(η, N)`. For channels with
//! different gains or noise per quadrature the overlap is evaluated from
//! the Wigner functions, either analytically ([`fidelity_overlap`]) or on
//! a quadrature grid ([`fidelity_numeric_diagonal`]).
//!
//! Amplitudes are complex `α` with the state `|α⟩ ∝ exp(αa† − α*a)|0⟩`; in
//! the formulas only `|α|²` enters.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::gaussian::{GaussianChannel, VACUUM};
use crate::{Error, Result};

/// Parity of a cat state `N_± (|α⟩ ± |−α⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StateKind {
    Coherent,
    Cat(Parity),
}

/// A pure input state: coherent or cat, with complex amplitude `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputState {
    kind: StateKind,
    #[serde(skip)]
    alpha: Complex64,
}

impl InputState {
    pub fn new(kind: StateKind, alpha: Complex64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha.norm(),
                expected: "finite amplitude",
            });
        }
        if kind == StateKind::Cat(Parity::Odd) && alpha.norm_sqr() == 0.0 {
            return Err(Error::Normalization);
        }
        Ok(Self { kind, alpha })
    }

    pub fn coherent(alpha: f64) -> Self {
        Self {
            kind: StateKind::Coherent,
            alpha: Complex64::from(alpha),
        }
    }

    pub fn cat(alpha: f64, parity: Parity) -> Result<Self> {
        Self::new(StateKind::Cat(parity), Complex64::from(alpha))
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Squared normalisation `N_±²` (1 for coherent states).
    fn norm_sq(&self) -> f64 {
        match self.kind {
            StateKind::Coherent => 1.0,
            StateKind::Cat(p) => 1.0 / (2.0 + 2.0 * p.sign() * (-2.0 * self.alpha.norm_sqr()).exp()),
        }
    }

    /// Wigner function as a sum of separable complex Gaussians
    /// `c · exp(−(q − a)²) · exp(−(p − b)²)`.
    fn wigner_terms(&self) -> Vec<WignerTerm> {
        let mu_q = Complex64::from(SQRT_2 * self.alpha.re);
        let mu_p = Complex64::from(SQRT_2 * self.alpha.im);
        let n2 = self.norm_sq();
        let c = Complex64::from(n2 / PI);
        let mut terms = vec![WignerTerm { c, a: mu_q, b: mu_p }];
        if let StateKind::Cat(parity) = self.kind {
            terms.push(WignerTerm { c, a: -mu_q, b: -mu_p });
            // interference fringes perpendicular to the displacement
            let cross = Complex64::from(
                parity.sign() * n2 / PI * (-2.0 * self.alpha.norm_sqr()).exp(),
            );
            let i = Complex64::i();
            for s in [1.0, -1.0] {
                terms.push(WignerTerm {
                    c: cross,
                    a: -i * s * mu_p,
                    b: i * s * mu_q,
                });
            }
        }
        terms
    }
}

#[derive(Debug, Clone, Copy)]
struct WignerTerm {
    c: Complex64,
    a: Complex64,
    b: Complex64,
}

/// Channel with independent gain and added noise on each quadrature:
/// `x_j → κ_j x_j + noise` with noise variance `N_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalChannel {
    pub gains: [f64; 2],
    pub noise: [f64; 2],
}

impl From<&GaussianChannel> for DiagonalChannel {
    fn from(ch: &GaussianChannel) -> Self {
        Self {
            gains: [ch.kappa(); 2],
            noise: [ch.noise(); 2],
        }
    }
}

impl DiagonalChannel {
    fn output_variance(&self, j: usize) -> f64 {
        self.gains[j] * self.gains[j] * VACUUM + self.noise[j]
    }
}

/// Closed-form fidelity of a coherent state.
pub fn fidelity_coherent(ch: &GaussianChannel, alpha: Complex64) -> f64 {
    let k = ch.kappa();
    let d = 1.0 + 2.0 * ch.noise() + ch.eta();
    2.0 / d * (-2.0 * alpha.norm_sqr() * (k - 1.0).powi(2) / d).exp()
}

/// Closed-form fidelity of an even or odd cat state.
pub fn fidelity_cat(ch: &GaussianChannel, alpha: Complex64, parity: Parity) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    if parity == Parity::Odd && a2 == 0.0 {
        return Err(Error::Normalization);
    }
    let (k, n, eta) = (ch.kappa(), ch.noise(), ch.eta());
    let d = 1.0 + 2.0 * n + eta;
    let s = parity.sign();
    let n4 = (2.0 + 2.0 * s * (-2.0 * a2).exp()).powi(-2);
    let e = |t: f64| (-2.0 * a2 * t / d).exp();
    let sum = e((1.0 - k).powi(2))
        + e((1.0 + k).powi(2))
        + 2.0 * s * e(2.0 + 2.0 * n)
        + 2.0 * s * e(2.0 * n + 2.0 * eta)
        + e(4.0 * n + (1.0 + k).powi(2))
        + e(4.0 * n + (1.0 - k).powi(2));
    Ok(4.0 * n4 / d * sum)
}

/// Closed-form fidelity for any supported input state.
pub fn fidelity(ch: &GaussianChannel, state: &InputState) -> Result<f64> {
    match state.kind {
        StateKind::Coherent => Ok(fidelity_coherent(ch, state.alpha)),
        StateKind::Cat(p) => fidelity_cat(ch, state.alpha, p),
    }
}

/// Exact Wigner overlap for a quadrature-diagonal channel.
///
/// Each pair of input terms contributes a product of one-dimensional
/// Gaussian integrals.
pub fn fidelity_overlap(state: &InputState, ch: &DiagonalChannel) -> f64 {
    let terms = state.wigner_terms();
    let var = [0.5 + ch.output_variance(0), 0.5 + ch.output_variance(1)];
    let gauss = |d: Complex64, v: f64| (-d * d / (2.0 * v)).exp() / (2.0 * PI * v).sqrt();
    let mut total = Complex64::from(0.0);
    for x in &terms {
        for y in &terms {
            total += x.c
                * y.c
                * PI
                * PI
                * gauss(x.a - ch.gains[0] * y.a, var[0])
                * gauss(x.b - ch.gains[1] * y.b, var[1]);
        }
    }
    2.0 * PI * total.re
}

/// Grid used by the numerical overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub step: f64,
}

impl QuadratureGrid {
    /// Square grid wide enough for amplitude `|α|`, with step 0.02.
    pub fn for_state(state: &InputState) -> Self {
        Self {
            half_width: (4.0 * state.alpha.norm() + 6.0).max(6.0),
            step: 0.02,
        }
    }

    fn nodes(&self) -> Vec<f64> {
        let n = (2.0 * self.half_width / self.step).round() as usize;
        (0..=n).map(|k| -self.half_width + k as f64 * self.step).collect()
    }
}

/// Change in fidelity under step halving accepted as converged.
pub const QUADRATURE_TOL: f64 = 1e-7;

/// Numerical `F = 2π ∫ W_in W_out` on a square grid for an isotropic
/// channel.
pub fn fidelity_numeric(state: &InputState, ch: &GaussianChannel) -> Result<f64> {
    fidelity_numeric_diagonal(state, &DiagonalChannel::from(ch))
}

/// Numerical overlap for a quadrature-diagonal channel.
///
/// `W_out` is obtained by convolving each Gaussian term of `W_in` with the
/// channel kernel. The grid sum is evaluated at the default step and at
/// half of it; the finer value is returned if the two agree to
/// [`QUADRATURE_TOL`].
pub fn fidelity_numeric_diagonal(state: &InputState, ch: &DiagonalChannel) -> Result<f64> {
    let grid = QuadratureGrid::for_state(state);
    let coarse = grid_overlap(state, ch, grid);
    let fine = grid_overlap(
        state,
        ch,
        QuadratureGrid {
            step: grid.step / 2.0,
            ..grid
        },
    );
    let delta = (fine - coarse).abs();
    if !(delta <= QUADRATURE_TOL) {
        return Err(Error::Quadrature { delta });
    }
    Ok(fine)
}

fn grid_overlap(state: &InputState, ch: &DiagonalChannel, grid: QuadratureGrid) -> f64 {
    let terms = state.wigner_terms();
    let xs = grid.nodes();
    let h = grid.step;
    let var = [ch.output_variance(0), ch.output_variance(1)];
    // the tensor-product grid sum factorises into q and p sums per term pair
    let line = |m_in: Complex64, m_out: Complex64, v: f64| -> Complex64 {
        let norm = 1.0 / (2.0 * PI * v).sqrt();
        xs.iter()
            .map(|&x| {
                let din = x - m_in;
                let dout = x - m_out;
                (-din * din - dout * dout / (2.0 * v)).exp() * norm
            })
            .sum::<Complex64>()
            * h
    };
    let mut total = Complex64::from(0.0);
    for x in &terms {
        for y in &terms {
            // W_out term: c π N(q; κ_q a, v_q) N(p; κ_p b, v_p)
            let q = line(x.a, ch.gains[0] * y.a, var[0]);
            let p = line(x.b, ch.gains[1] * y.b, var[1]);
            total += x.c * y.c * PI * q * p;
        }
    }
    2.0 * PI * total.re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(eta: f64, n: f64) -> GaussianChannel {
        GaussianChannel::new(eta, n).unwrap()
    }

    #[test]
    fn identity_channel_is_perfect() {
        let id = ch(1.0, 0.0);
        for a in [0.0, 1.0, 2.0] {
            assert!((fidelity_coherent(&id, Complex64::from(a)) - 1.0).abs() < 1e-15);
            assert!((fidelity_cat(&id, Complex64::from(a), Parity::Even).unwrap() - 1.0).abs() < 1e-14);
        }
        let s = InputState::coherent(1.0);
        assert!((fidelity_numeric(&s, &id).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_input() {
        let c = ch(0.4, 0.5);
        let f = fidelity_coherent(&c, Complex64::from(0.0));
        assert!((f - 2.0 / (1.0 + 1.0 + 0.4)).abs() < 1e-15);
    }

    #[test]
    fn odd_cat_needs_amplitude() {
        assert_eq!(InputState::cat(0.0, Parity::Odd), Err(Error::Normalization));
        assert!(fidelity_cat(&ch(0.5, 0.3), Complex64::from(0.0), Parity::Odd).is_err());
        assert!(InputState::cat(0.0, Parity::Even).is_ok());
    }

    #[test]
    fn numeric_matches_closed_forms() {
        for (eta, n) in [(0.4, 0.5), (0.5, 0.3), (0.33, 0.4), (1.5, 0.4)] {
            let c = ch(eta, n);
            for alpha in [0.5, 2.0] {
                let a = Complex64::from(alpha);
                let coh = InputState::coherent(alpha);
                assert!((fidelity_numeric(&coh, &c).unwrap() - fidelity_coherent(&c, a)).abs() < 1e-9);
                for p in [Parity::Even, Parity::Odd] {
                    let s = InputState::cat(alpha, p).unwrap();
                    let closed = fidelity_cat(&c, a, p).unwrap();
                    assert!((fidelity_numeric(&s, &c).unwrap() - closed).abs() < 1e-9);
                    assert!((fidelity_overlap(&s, &DiagonalChannel::from(&c)) - closed).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn complex_amplitude_is_phase_covariant() {
        // a phase-insensitive channel sees only |α|
        let c = ch(0.6, 0.3);
        let s = InputState::new(StateKind::Cat(Parity::Even), Complex64::from_polar(1.5, 0.9)).unwrap();
        let closed = fidelity_cat(&c, s.alpha(), Parity::Even).unwrap();
        assert!((fidelity_numeric(&s, &c).unwrap() - closed).abs() < 1e-9);
    }
}
