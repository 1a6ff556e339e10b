//! Closed-form versus pipeline consistency suite, run by `transduce
//! selfcheck`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capacity::{q_lb, q_ub};
use crate::dc::{dc_channel, dc_channel_matrices, dc_eta_closed, dc_noise_ms_mo_closed, dc_noise_squeeze_gap, dc_noise_squeeze_gap_closed, dc_stability_root, dc_stable};
use crate::fidelity::{fidelity_cat, fidelity_coherent, fidelity_numeric, InputState, Parity};
use crate::gaussian::GaussianChannel;
use crate::params::{Direction, SqueezeSite, SystemParams};
use crate::tp::{entangled_covariance, entangled_form, tp_params_closed, tp_stability_root, tp_stable};
use crate::Result;

/// Result of one consistency check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub samples: usize,
    /// Largest observed deviation.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

const SITES: [SqueezeSite; 2] = [SqueezeSite::Microwave, SqueezeSite::Optical];
const DIRECTIONS: [Direction; 2] = [Direction::MicrowaveToOptical, Direction::OpticalToMicrowave];

/// Random parameters strictly inside the stable region of either scheme.
pub fn random_stable(rng: &mut impl Rng, teleportation: bool) -> SystemParams {
    let coop: f64 = if teleportation {
        rng.random_range(0.0..0.95)
    } else {
        rng.random_range(0.0..2.0)
    };
    let edge = if teleportation {
        (1.0 - coop).powi(2) / 4.0
    } else {
        (1.0 + coop).powi(2) / 4.0
    };
    SystemParams::new(coop, rng.random_range(0.0..0.95) * edge)
        .with_extraction(rng.random_range(0.5..=1.0), rng.random_range(0.5..=1.0))
        .with_thermal(rng.random_range(0.0..1.0))
        .with_theta(rng.random_range(0.0..TAU))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

struct Check {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    worst: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            samples: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.samples += 1;
        // NaN counts as a failure
        if !(deviation <= self.worst) {
            self.worst = if deviation.is_nan() { f64::INFINITY } else { deviation };
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            samples: self.samples,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.samples > 0 && self.worst <= self.tolerance,
        }
    }
}

/// Runs every check on `samples` random parameter sets drawn from `seed`.
pub fn run(samples: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dc_eta = Check::new("dc eta: pipeline vs closed form", 1e-10);
    let mut dc_noise = Check::new("dc noise (ms, m->o): pipeline vs closed form", 1e-10);
    let mut gap = Check::new("dc noise gap: pipeline vs closed form", 1e-9);
    let mut tp_form = Check::new("tp standard form: pipeline vs closed form", 1e-10);
    let mut purity = Check::new("ideal extraction: dc quantum-limited and tp state pure", 1e-9);
    let mut stability = Check::new("stability root sign vs predicate", 0.0);
    let mut ordering = Check::new("q_lb <= q_ub", 1e-9);
    let mut fid = Check::new("fidelity: closed form vs Wigner overlap", 1e-6);

    for _ in 0..samples {
        let p = random_stable(&mut rng, false);
        for site in SITES {
            for dir in DIRECTIONS {
                let q = p.with_squeeze_at(site).with_direction(dir);
                let ch = dc_channel(&q)?;
                dc_eta.record(rel(ch.eta(), dc_eta_closed(&q)?));
                ordering.record((q_lb(&ch) - q_ub(&ch)).max(0.0));
                if site == SqueezeSite::Microwave && dir == Direction::MicrowaveToOptical {
                    dc_noise.record(rel(ch.noise(), dc_noise_ms_mo_closed(&q)?));
                    gap.record((dc_noise_squeeze_gap(&q)? - dc_noise_squeeze_gap_closed(&q)?).abs());
                }
                let (t, n) = dc_channel_matrices(&q.with_zeta(1.0).with_thermal(0.0))?;
                let c = 0.5 * (1.0 - t.determinant());
                purity.record((n.determinant() - c * c).abs() / n.amax().max(1.0).powi(2));
            }
        }

        let p = random_stable(&mut rng, true);
        for site in SITES {
            let q = p.with_squeeze_at(site);
            tp_form.record(entangled_form(&q)?.relative_diff(&tp_params_closed(&q)?));
            let v = entangled_covariance(&q.with_zeta(1.0))?;
            // eigenvalue rounding grows like ε·|V|² near the stability edge
            let scale = v.matrix().amax().max(1.0).powi(2);
            for nu in v.symplectic_eigenvalues()? {
                purity.record((nu - 0.5).abs() / scale);
            }
        }

        // straddle each stability edge
        let coop: f64 = rng.random_range(0.0..0.95);
        let offset: f64 = rng.random_range(-0.05..0.05);
        let dc_edge = SystemParams::new(coop, ((1.0 + coop) / 2.0 + offset).powi(2));
        let agree = (dc_stability_root(&dc_edge)? < 0.0) == dc_stable(&dc_edge);
        stability.record(if agree { 0.0 } else { 1.0 });
        let tp_edge = SystemParams::new(coop, ((1.0 - coop) / 2.0 + offset).max(0.0).powi(2));
        let agree = (tp_stability_root(&tp_edge)? < 0.0) == tp_stable(&tp_edge);
        stability.record(if agree { 0.0 } else { 1.0 });
    }

    for _ in 0..samples.clamp(1, 10) {
        let eta: f64 = rng.random_range(0.1..1.5);
        let nbar: f64 = rng.random_range(0.0..1.0);
        let alpha: f64 = rng.random_range(0.0..2.5);
        let ch = GaussianChannel::thermal(eta, nbar).or_else(|_| GaussianChannel::additive(nbar))?;
        let coh = InputState::coherent(alpha);
        fid.record((fidelity_numeric(&coh, &ch)? - fidelity_coherent(&ch, coh.alpha())).abs());
        let cat = InputState::cat(alpha, Parity::Even)?;
        fid.record((fidelity_numeric(&cat, &ch)? - fidelity_cat(&ch, cat.alpha(), Parity::Even)?).abs());
    }

    Ok([dc_eta, dc_noise, gap, tp_form, purity, stability, ordering, fid]
        .into_iter()
        .map(Check::finish)
        .collect())
}
