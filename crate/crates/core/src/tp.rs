//! Teleportation-based transduction.
//!
//! The two-mode-squeezing device emits a microwave-optical entangled
//! Gaussian state. Reduced to standard form it is described by six numbers
//! ([`EntangledStateForm`]). Teleporting with quadrature gains
//! `(κ_q, κ_p)` turns it into a single-mode channel whose noise depends on
//! the gains ([`tp_channel`]); the gains are then optimised
//! ([`optimize_gains`]).

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::Serialize;

use crate::capacity::{q_lb, q_lb_raw, MICROWAVE_MODE, OPTICAL_MODE};
use crate::fidelity::{fidelity, DiagonalChannel, InputState};
use crate::gaussian::{GaussianChannel, QuadCovariance, ADDITIVE_EPS, VACUUM};
use crate::optimize::{scan_refine, Maximum};
use crate::params::{Direction, Scheme, SqueezeSite, SystemParams};
use crate::scattering::{input_covariance, is_stable, stability_root, Port, ScatteringModel};
use crate::{Error, Result};

/// Stability predicate `1 − C_g − 2√C_v > 0`.
pub fn tp_stable(p: &SystemParams) -> bool {
    is_stable(Scheme::Teleportation, p)
}

/// Scattering model of the two-mode-squeezing device.
pub fn tp_scattering(p: &SystemParams) -> Result<ScatteringModel> {
    ScatteringModel::build(Scheme::Teleportation, p)
}

/// Largest real part among the roots of `det G(α) = 0`.
pub fn tp_stability_root(p: &SystemParams) -> Result<f64> {
    stability_root(Scheme::Teleportation, p)
}

/// Covariance of the emitted microwave and optical output fields, ordered
/// `(microwave, optical)` as in [`crate::capacity::MICROWAVE_MODE`].
pub fn entangled_covariance(p: &SystemParams) -> Result<QuadCovariance> {
    let model = tp_scattering(p)?;
    let out = model.output_covariance(&input_covariance(p.n_in));
    let [m0, m1] = Port::MicrowaveCoupled.quadratures();
    let [o0, o1] = Port::OpticalCoupled.quadratures();
    let mut idx = [0; 4];
    idx[2 * MICROWAVE_MODE..2 * MICROWAVE_MODE + 2].copy_from_slice(&[m0, m1]);
    idx[2 * OPTICAL_MODE..2 * OPTICAL_MODE + 2].copy_from_slice(&[o0, o1]);
    let v = DMatrix::from_fn(4, 4, |i, j| out[(idx[i], idx[j])]);
    // symmetrise away rounding before validation
    QuadCovariance::new((&v + v.transpose()) * 0.5)
}

/// Standard-form parameters of the entangled state, in doubled units:
/// the covariance is `½ [[u_q,0,v_q,0],[0,u_p,0,−v_p],[v_q,0,w_q,0],[0,−v_p,0,w_p]]`
/// with `u` the microwave side and `w` the optical side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntangledStateForm {
    pub u_q: f64,
    pub u_p: f64,
    pub v_q: f64,
    pub v_p: f64,
    pub w_q: f64,
    pub w_p: f64,
}

impl EntangledStateForm {
    /// Reassembled covariance, ordered `(microwave, optical)`.
    pub fn covariance(&self) -> Result<QuadCovariance> {
        let m = Matrix4::new(
            self.u_q, 0.0, self.v_q, 0.0, //
            0.0, self.u_p, 0.0, -self.v_p, //
            self.v_q, 0.0, self.w_q, 0.0, //
            0.0, -self.v_p, 0.0, self.w_p,
        ) * VACUUM;
        QuadCovariance::new(DMatrix::from_iterator(4, 4, m.iter().copied()))
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.u_q - other.u_q,
            self.u_p - other.u_p,
            self.v_q - other.v_q,
            self.v_p - other.v_p,
            self.w_q - other.w_q,
            self.w_p - other.w_p,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }

    /// Largest relative difference between two forms.
    pub fn relative_diff(&self, other: &Self) -> f64 {
        let scale = [self.u_q, self.u_p, self.v_q, self.v_p, self.w_q, self.w_p]
            .iter()
            .fold(1.0f64, |m, x| m.max(x.abs()));
        self.max_abs_diff(other) / scale
    }

    /// Quadratic noise factors `(A, B)` of the teleported channel, so that
    /// the per-quadrature noise variances are `A/2` and `B/2`.
    pub fn noise_factors(&self, gains: TeleportGains, direction: Direction) -> (f64, f64) {
        let (kq, kp) = (gains.kappa_q, gains.kappa_p);
        let (sq, sp, rq, rp) = match direction {
            // the receiver holds the optical mode: input side weights u
            Direction::MicrowaveToOptical => (self.u_q, self.u_p, self.w_q, self.w_p),
            Direction::OpticalToMicrowave => (self.w_q, self.w_p, self.u_q, self.u_p),
        };
        (
            sq * kq * kq - 2.0 * self.v_q * kq + rq,
            sp * kp * kp - 2.0 * self.v_p * kp + rp,
        )
    }

    /// Gain per quadrature minimising that quadrature's noise, `v/u`
    /// (`v/w` for optical-to-microwave).
    pub fn noise_vertex(&self, direction: Direction) -> (f64, f64) {
        match direction {
            Direction::MicrowaveToOptical => (self.v_q / self.u_q, self.v_p / self.u_p),
            Direction::OpticalToMicrowave => (self.v_q / self.w_q, self.v_p / self.w_p),
        }
    }
}

fn rotation(a: f64) -> Matrix2<f64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Tolerated residual on entries that vanish in standard form.
pub const FORM_TOL: f64 = 1e-8;

/// Reduces the emitted covariance to standard form.
///
/// A squeezing phase `θ` is mapped onto `θ = π/2` by local phase rotations
/// of `±(θ − π/2)/2` (opposite senses on the two modes, which sense on
/// which mode depending on the squeezing site). A further `π/2` rotation
/// of the microwave mode brings the state to standard form.
pub fn standard_form(v: &QuadCovariance, p: &SystemParams) -> Result<EntangledStateForm> {
    if v.modes() != 2 {
        return Err(Error::Covariance(format!(
            "expected a two-mode covariance, got {} modes",
            v.modes()
        )));
    }
    let phi = (p.theta - FRAC_PI_2) / 2.0;
    let (phi_m, phi_o) = match p.squeeze_at {
        SqueezeSite::Microwave => (phi, -phi),
        SqueezeSite::Optical => (-phi, phi),
    };
    let mut r = DMatrix::zeros(4, 4);
    let rm = rotation(FRAC_PI_2) * rotation(phi_m);
    let ro = rotation(phi_o);
    let (m, o) = (2 * MICROWAVE_MODE, 2 * OPTICAL_MODE);
    r.view_mut((m, m), (2, 2)).copy_from(&rm);
    r.view_mut((o, o), (2, 2)).copy_from(&ro);
    let mut s = &r * v.matrix() * r.transpose();
    if s[(m, o)] < 0.0 {
        // a π rotation of the microwave mode fixes the correlation sign
        for k in 0..4 {
            for idx in [m, m + 1] {
                if !(m..m + 2).contains(&k) {
                    s[(idx, k)] = -s[(idx, k)];
                    s[(k, idx)] = -s[(k, idx)];
                }
            }
        }
    }
    let scale = s.amax().max(1.0);
    let residual = [(m, m + 1), (o, o + 1), (m, o + 1), (m + 1, o)]
        .iter()
        .map(|&(i, j)| s[(i, j)].abs())
        .fold(0.0, f64::max)
        / scale;
    if residual > FORM_TOL {
        return Err(Error::FormExtraction { residual });
    }
    Ok(EntangledStateForm {
        u_q: 2.0 * s[(m, m)],
        u_p: 2.0 * s[(m + 1, m + 1)],
        v_q: 2.0 * s[(m, o)],
        v_p: -2.0 * s[(m + 1, o + 1)],
        w_q: 2.0 * s[(o, o)],
        w_p: 2.0 * s[(o + 1, o + 1)],
    })
}

/// Standard form obtained from the full scattering pipeline.
pub fn entangled_form(p: &SystemParams) -> Result<EntangledStateForm> {
    standard_form(&entangled_covariance(p)?, p)
}

fn require_stable(p: &SystemParams) -> Result<()> {
    p.validate()?;
    if tp_stable(p) {
        Ok(())
    } else {
        Err(Error::Unstable(format!(
            "1 - C_g - 2 sqrt(C_v) <= 0 at C_g = {}, C_v = {}",
            p.coop, p.squeezing
        )))
    }
}

/// Closed-form standard-form parameters for microwave squeezing.
pub fn tp_params_ms_closed(p: &SystemParams) -> Result<EntangledStateForm> {
    require_stable(p)?;
    let (c, s) = (p.coop, p.squeezing.sqrt());
    let th = p.n_in * (1.0 - p.zeta_m);
    let v_num = 4.0 * (c * p.zeta_m * p.zeta_o).sqrt() * (1.0 + c + 2.0 * th);
    let side = |sign: f64| {
        let den = (1.0 - c - sign * 2.0 * s).powi(2);
        (
            1.0 + 8.0 * p.zeta_m * (c + sign * s + th) / den,
            v_num / den,
            1.0 + 8.0 * c * p.zeta_o * (1.0 - sign * s + th) / den,
        )
    };
    let (u_q, v_q, w_q) = side(1.0);
    let (u_p, v_p, w_p) = side(-1.0);
    Ok(EntangledStateForm {
        u_q,
        u_p,
        v_q,
        v_p,
        w_q,
        w_p,
    })
}

/// Closed-form standard-form parameters for optical squeezing.
pub fn tp_params_os_closed(p: &SystemParams) -> Result<EntangledStateForm> {
    require_stable(p)?;
    let (c, s) = (p.coop, p.squeezing.sqrt());
    let th = p.n_in * (1.0 - p.zeta_m);
    let side = |sign: f64| {
        let den = (1.0 - c + sign * 2.0 * s).powi(2);
        let amp = 1.0 + sign * 2.0 * s;
        (
            1.0 + 8.0 * p.zeta_m * (c * (1.0 + sign * s) + amp * amp * th) / den,
            4.0 * (c * p.zeta_m * p.zeta_o).sqrt() * (1.0 + c + 2.0 * amp * th) / den,
            1.0 + 8.0 * p.zeta_o * (c * (1.0 + th) - sign * s) / den,
        )
    };
    let (u_q, v_q, w_q) = side(1.0);
    let (u_p, v_p, w_p) = side(-1.0);
    Ok(EntangledStateForm {
        u_q,
        u_p,
        v_q,
        v_p,
        w_q,
        w_p,
    })
}

/// Closed-form parameters for `p.squeeze_at`.
pub fn tp_params_closed(p: &SystemParams) -> Result<EntangledStateForm> {
    match p.squeeze_at {
        SqueezeSite::Microwave => tp_params_ms_closed(p),
        SqueezeSite::Optical => tp_params_os_closed(p),
    }
}

/// Homodyne gains of the corrective displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportGains {
    pub kappa_q: f64,
    pub kappa_p: f64,
}

impl TeleportGains {
    pub fn new(kappa_q: f64, kappa_p: f64) -> Result<Self> {
        for (name, k) in [("kappa_q", kappa_q), ("kappa_p", kappa_p)] {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::Domain {
                    name,
                    value: k,
                    expected: "positive gain",
                });
            }
        }
        Ok(Self { kappa_q, kappa_p })
    }

    pub fn symmetric(kappa: f64) -> Result<Self> {
        Self::new(kappa, kappa)
    }

    /// Channel transmissivity `κ_q κ_p`.
    pub fn eta(&self) -> f64 {
        self.kappa_q * self.kappa_p
    }

    fn from_log(l: f64, r: f64) -> Self {
        Self {
            kappa_q: ((l + r) / 2.0).exp(),
            kappa_p: ((l - r) / 2.0).exp(),
        }
    }
}

/// Transmission and noise matrices `(Diag(κ_q, κ_p), Diag(N_q, N_p))`.
pub fn tp_channel_matrices(
    form: &EntangledStateForm,
    gains: TeleportGains,
    direction: Direction,
) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    let (a, b) = form.noise_factors(gains, direction);
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::Numerical(format!(
            "teleportation noise factors ({a}, {b}) are negative"
        )));
    }
    Ok((
        Matrix2::new(gains.kappa_q, 0.0, 0.0, gains.kappa_p),
        Matrix2::new(a / 2.0, 0.0, 0.0, b / 2.0),
    ))
}

/// Per-quadrature description of the teleported channel.
pub fn tp_diagonal_channel(
    form: &EntangledStateForm,
    gains: TeleportGains,
    direction: Direction,
) -> Result<DiagonalChannel> {
    let (t, n) = tp_channel_matrices(form, gains, direction)?;
    Ok(DiagonalChannel {
        gains: [t[(0, 0)], t[(1, 1)]],
        noise: [n[(0, 0)], n[(1, 1)]],
    })
}

/// Teleportation channel `(η, N) = (κ_q κ_p, ½√(AB))`.
pub fn tp_channel(
    form: &EntangledStateForm,
    gains: TeleportGains,
    direction: Direction,
) -> Result<GaussianChannel> {
    let (a, b) = form.noise_factors(gains, direction);
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::Numerical(format!(
            "teleportation noise factors ({a}, {b}) are negative"
        )));
    }
    GaussianChannel::new(gains.eta(), 0.5 * (a * b).sqrt())
}

/// Squeezer, beam-splitter (or amplifier) and thermal-environment model
/// equivalent to the teleported channel.
///
/// The channel is `x → κ S(r₁) x + √|1 − κ²| S(r₂) e`, with `S(r)` a
/// quadrature squeezer and `e` a thermal mode of occupation `n_th`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalentCircuit {
    pub kappa: f64,
    pub r1: f64,
    pub r2: f64,
    pub n_th: f64,
}

impl EquivalentCircuit {
    /// `(T, N)` of the reconstructed channel.
    pub fn channel_matrices(&self) -> (Matrix2<f64>, Matrix2<f64>) {
        let t = Matrix2::new(
            self.kappa * self.r1.exp(),
            0.0,
            0.0,
            self.kappa * (-self.r1).exp(),
        );
        let n = (1.0 - self.kappa * self.kappa).abs() * (self.n_th + VACUUM);
        let noise = Matrix2::new(
            n * (2.0 * self.r2).exp(),
            0.0,
            0.0,
            n * (-2.0 * self.r2).exp(),
        );
        (t, noise)
    }
}

/// Decomposes the teleported channel into its equivalent circuit. Covers
/// both the attenuating (`κ_qκ_p < 1`) and the amplifying branch.
pub fn tp_equivalent_decomposition(
    form: &EntangledStateForm,
    gains: TeleportGains,
    direction: Direction,
) -> Result<EquivalentCircuit> {
    let eta = gains.eta();
    if (eta - 1.0).abs() < ADDITIVE_EPS {
        return Err(Error::AdditiveLimit);
    }
    let (a, b) = form.noise_factors(gains, direction);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Numerical(format!(
            "teleportation noise factors ({a}, {b}) must be positive"
        )));
    }
    let noise = 0.5 * (a * b).sqrt();
    let n_th = noise / (1.0 - eta).abs() - VACUUM;
    Ok(EquivalentCircuit {
        kappa: eta.sqrt(),
        r1: 0.5 * (gains.kappa_q / gains.kappa_p).ln(),
        r2: 0.25 * (a / b).ln(),
        n_th: n_th.max(0.0),
    })
}

/// What the gain search maximises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainObjective {
    /// Capacity lower bound `Q_LB`.
    MaxLowerBound,
    /// Closed-form fidelity for the given input state.
    MaxFidelity(InputState),
    /// `Q_LB` subject to `κ_q κ_p` equal to the target transmissivity.
    MatchEta(f64),
}

/// Region of gain space searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GainDomain {
    /// Only attenuating channels, `κ_q κ_p ≤ 1`.
    ThermalLoss,
    /// The whole box of gains.
    Unrestricted,
}

/// Gain search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainSearch {
    /// Each gain lies in `[e^{−bound}, e^{bound}]`.
    pub log_bound: f64,
    /// Coarse scan points per axis.
    pub grid: usize,
    /// Final bracket width in log-gain.
    pub tol: f64,
    pub domain: GainDomain,
    /// Transmissivity used for the symmetric representative when the rate
    /// is identically zero.
    pub fallback_eta: Option<f64>,
}

impl Default for GainSearch {
    fn default() -> Self {
        Self {
            log_bound: 6.0,
            grid: 64,
            tol: 1e-8,
            domain: GainDomain::ThermalLoss,
            fallback_eta: None,
        }
    }
}

/// Outcome of [`optimize_gains`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainSolution {
    pub gains: TeleportGains,
    pub channel: GaussianChannel,
    /// Objective at `gains`; rates are clamped at zero.
    pub objective: f64,
    /// Unclamped objective at the search optimum.
    pub raw_objective: f64,
    pub evaluations: usize,
    /// The rate was zero everywhere and `gains` is a representative.
    pub plateau: bool,
}

/// Maximises `objective` over the teleportation gains.
///
/// The search runs in rotated log coordinates `L = ln κ_q + ln κ_p`,
/// `r = ln κ_q − ln κ_p`. For fixed `L` the transmissivity is fixed and
/// every supported objective improves with lower noise, so the inner
/// search over `r` minimises the noise; the outer search maximises the
/// objective over `L`. Both levels scan `grid` points, add the noise
/// vertices as seeds and refine by golden section.
pub fn optimize_gains(
    form: &EntangledStateForm,
    direction: Direction,
    objective: GainObjective,
    search: &GainSearch,
) -> Result<GainSolution> {
    let bound = search.log_bound;
    if !(bound > 0.0 && bound.is_finite()) || search.grid < 2 || !(search.tol > 0.0) {
        return Err(Error::Config(format!("invalid gain search settings {search:?}")));
    }
    let (vq, vp) = form.noise_vertex(direction);
    let (lq, lp) = (vq.ln(), vp.ln());
    let mut evaluations = 0usize;

    let inner = |l: f64, evaluations: &mut usize| -> Maximum {
        let half = 2.0 * bound - l.abs();
        let neg_log_noise = |r: f64| {
            let (a, b) = form.noise_factors(TeleportGains::from_log(l, r), direction);
            -(0.5 * (a * b).sqrt()).ln()
        };
        let m = scan_refine(
            neg_log_noise,
            -half,
            half,
            search.grid,
            &[2.0 * lq - l, l - 2.0 * lp],
            search.tol,
        );
        *evaluations += m.evaluations;
        m
    };

    let score = |gains: TeleportGains| -> f64 {
        let Ok(ch) = tp_channel(form, gains, direction) else {
            return f64::NAN;
        };
        match objective {
            GainObjective::MaxLowerBound | GainObjective::MatchEta(_) => q_lb_raw(&ch),
            GainObjective::MaxFidelity(state) => fidelity(&ch, &state).unwrap_or(f64::NAN),
        }
    };

    let (l, r, raw) = match objective {
        GainObjective::MatchEta(target) => {
            let l = target.ln();
            if !(l.abs() <= 2.0 * bound) {
                return Err(Error::Domain {
                    name: "eta",
                    value: target,
                    expected: "target transmissivity inside the gain box",
                });
            }
            let r = inner(l, &mut evaluations).x;
            (l, r, score(TeleportGains::from_log(l, r)))
        }
        _ => {
            let hi = match search.domain {
                GainDomain::ThermalLoss => 0.0,
                GainDomain::Unrestricted => 2.0 * bound,
            };
            let mut inner_evals = 0usize;
            let outer = scan_refine(
                |l| {
                    let r = inner(l, &mut inner_evals).x;
                    score(TeleportGains::from_log(l, r))
                },
                -2.0 * bound,
                hi,
                search.grid,
                &[lq + lp],
                search.tol,
            );
            evaluations += inner_evals + outer.evaluations;
            let r = inner(outer.x, &mut evaluations).x;
            (outer.x, r, outer.value)
        }
    };
    if !raw.is_finite() && raw != f64::INFINITY {
        return Err(Error::Optimization(format!(
            "objective is not finite anywhere in the gain box (best {raw})"
        )));
    }

    let mut gains = TeleportGains::from_log(l, r);
    let plateau = matches!(objective, GainObjective::MaxLowerBound) && raw <= 0.0;
    if plateau {
        if let Some(eta) = search.fallback_eta {
            gains = TeleportGains::symmetric(eta.sqrt())?;
        }
    }
    let channel = tp_channel(form, gains, direction)?;
    let value = match objective {
        GainObjective::MaxFidelity(state) => fidelity(&channel, &state)?,
        _ => q_lb(&channel),
    };
    Ok(GainSolution {
        gains,
        channel,
        objective: value,
        raw_objective: raw,
        evaluations,
        plateau,
    })
}
