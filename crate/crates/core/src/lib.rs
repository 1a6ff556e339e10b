//! Gaussian-channel models of microwave-optical quantum transduction.
//!
//! Two transduction schemes are modelled on a cavity electro-optic device
//! with single-mode squeezing on either the microwave or the optical mode:
//!
//! * **direct conversion** ([`dc`]): a beam-splitter interaction swaps the
//!   microwave and optical excitations;
//! * **teleportation-based** ([`tp`]): a two-mode-squeezing interaction
//!   produces microwave-optical entanglement which is then used to teleport
//!   the input state with quadrature-dependent displacement gains.
//!
//! Both reduce to a single-mode phase-insensitive Gaussian channel
//! ([`GaussianChannel`]) whose quantum-capacity bounds live in [`capacity`]
//! and whose state-transfer fidelities live in [`fidelity`]. The [`sweep`]
//! module evaluates all of this on parameter grids.
//!
//! All rates are normalised to the total cavity loss rates
//! (`γ_o = γ_m = 1`), all frequencies are on resonance, and the vacuum
//! quadrature variance is `1/2`.
//!
//! ```
//! use transduction::{dc, capacity, SystemParams};
//!
//! let p = SystemParams::new(0.1, 0.0);
//! let ch = dc::dc_channel(&p).unwrap();
//! assert!((ch.eta() - 0.4 / 1.21).abs() < 1e-12);
//! assert_eq!(capacity::q_lb(&ch), 0.0);
//! ```

pub mod capacity;
pub mod config;
pub mod dc;
mod error;
pub mod fidelity;
pub mod gaussian;
pub mod optimize;
pub mod output;
mod params;
pub mod scattering;
pub mod selfcheck;
pub mod sweep;
pub mod tp;

pub use error::{Error, Result};
pub use gaussian::{ChannelClass, GaussianChannel, QuadCovariance};
pub use params::{Direction, Scheme, SqueezeSite, SystemParams};
