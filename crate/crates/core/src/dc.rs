//! Direct-conversion transduction channel.
//!
//! The channel is read off the quadrature scattering matrix: the
//! transmission block between the two coupled ports and the noise collected
//! from every other input.

use nalgebra::Matrix2;

use crate::gaussian::{channel_from_matrices, GaussianChannel};
use crate::params::{Direction, Scheme, SqueezeSite, SystemParams};
use crate::scattering::{input_covariance, is_stable, stability_root, Port, ScatteringModel};
use crate::{Error, Result};

/// Stability predicate `1 + C_g − 2√C_v > 0`.
pub fn dc_stable(p: &SystemParams) -> bool {
    is_stable(Scheme::DirectConversion, p)
}

/// Scattering model of the beam-splitter device.
pub fn dc_scattering(p: &SystemParams) -> Result<ScatteringModel> {
    ScatteringModel::build(Scheme::DirectConversion, p)
}

/// Largest real part among the roots of `det G(α) = 0`; negative iff the
/// device is stable.
pub fn dc_stability_root(p: &SystemParams) -> Result<f64> {
    stability_root(Scheme::DirectConversion, p)
}

fn require_stable(p: &SystemParams) -> Result<()> {
    p.validate()?;
    if dc_stable(p) {
        Ok(())
    } else {
        Err(Error::Unstable(format!(
            "1 + C_g - 2 sqrt(C_v) <= 0 at C_g = {}, C_v = {}",
            p.coop, p.squeezing
        )))
    }
}

/// Closed-form transmissivity, identical for both directions and both
/// squeezing sites.
pub fn dc_eta_closed(p: &SystemParams) -> Result<f64> {
    require_stable(p)?;
    Ok(4.0 * p.coop * p.zeta_o * p.zeta_m / ((1.0 + p.coop).powi(2) - 4.0 * p.squeezing))
}

/// Closed-form mixed-in noise for microwave squeezing, microwave to optical.
///
/// Only the numbers in `p` are used; its `squeeze_at` and `direction`
/// fields are ignored.
pub fn dc_noise_ms_mo_closed(p: &SystemParams) -> Result<f64> {
    require_stable(p)?;
    let (c, s) = (p.coop, p.squeezing.sqrt());
    let a_minus = 1.0 + c - 2.0 * s;
    let a_plus = 1.0 + c + 2.0 * s;
    let thermal = (1.0 + 2.0 * p.n_in) * (1.0 - p.zeta_m) - 1.0;
    let b_plus = thermal + 2.0 * s;
    let b_minus = thermal - 2.0 * s;
    let x = a_minus * a_minus + 4.0 * c * p.zeta_o * b_plus;
    let y = a_plus * a_plus + 4.0 * c * p.zeta_o * b_minus;
    Ok((x * y).sqrt() / (2.0 * ((1.0 + c).powi(2) - 4.0 * p.squeezing)))
}

/// Transmission and noise matrices `(T, N)` of the channel in
/// `p.direction`.
pub fn dc_channel_matrices(p: &SystemParams) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    let model = dc_scattering(p)?;
    let (to, from) = match p.direction {
        Direction::MicrowaveToOptical => (Port::OpticalCoupled, Port::MicrowaveCoupled),
        Direction::OpticalToMicrowave => (Port::MicrowaveCoupled, Port::OpticalCoupled),
    };
    let v_in = input_covariance(p.n_in);
    Ok((model.block(to, from), model.noise_matrix(to, from, &v_in)))
}

/// Direct-conversion channel in `p.direction` for `p.squeeze_at`.
pub fn dc_channel(p: &SystemParams) -> Result<GaussianChannel> {
    let (t, n) = dc_channel_matrices(p)?;
    channel_from_matrices(&t, &n)
}

/// `N_OS² − N_MS²` for microwave-to-optical conversion, each from the full
/// scattering pipeline.
pub fn dc_noise_squeeze_gap(p: &SystemParams) -> Result<f64> {
    let base = p.with_direction(Direction::MicrowaveToOptical);
    let os = dc_channel(&base.with_squeeze_at(SqueezeSite::Optical))?.noise();
    let ms = dc_channel(&base.with_squeeze_at(SqueezeSite::Microwave))?.noise();
    Ok(os * os - ms * ms)
}

/// Closed form of [`dc_noise_squeeze_gap`].
pub fn dc_noise_squeeze_gap_closed(p: &SystemParams) -> Result<f64> {
    require_stable(p)?;
    let den = (1.0 + p.coop).powi(2) - 4.0 * p.squeezing;
    Ok(16.0 * (1.0 - p.coop * p.coop) * p.squeezing * (1.0 - p.zeta_o) * p.zeta_o / (den * den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::validate_channel_pair;

    fn fig2(direction: Direction, site: SqueezeSite, cv: f64) -> SystemParams {
        SystemParams::new(0.1, cv)
            .with_extraction(0.9, 0.95)
            .with_thermal(0.1)
            .with_direction(direction)
            .with_squeeze_at(site)
    }

    #[test]
    fn closed_forms_at_reference_point() {
        let p = fig2(Direction::MicrowaveToOptical, SqueezeSite::Microwave, 0.1);
        let ch = dc_channel(&p).unwrap();
        assert!((ch.eta() - 0.422_222_222_222_222_2).abs() < 1e-12);
        assert!((dc_eta_closed(&p).unwrap() - ch.eta()).abs() < 1e-12);
        assert!((ch.noise() - 0.316_400_364_525_949_3).abs() < 1e-12);
        assert!((dc_noise_ms_mo_closed(&p).unwrap() - ch.noise()).abs() < 1e-12);
    }

    #[test]
    fn unprinted_cases_frozen() {
        let cases = [
            (Direction::OpticalToMicrowave, SqueezeSite::Microwave, 0.50964),
            (Direction::MicrowaveToOptical, SqueezeSite::Optical, 0.56338),
            (Direction::OpticalToMicrowave, SqueezeSite::Optical, 0.34238),
        ];
        for (d, s, n) in cases {
            let ch = dc_channel(&fig2(d, s, 0.1)).unwrap();
            assert!((ch.noise() - n).abs() < 1e-5, "{d} {s}: {}", ch.noise());
        }
        let p = SystemParams::new(0.1, 0.0)
            .with_zeta(0.95)
            .with_thermal(0.1)
            .with_direction(Direction::OpticalToMicrowave)
            .with_squeeze_at(SqueezeSite::Optical);
        let ch = dc_channel(&p).unwrap();
        assert!((ch.eta() - 0.298_347_107_438_016_4).abs() < 1e-12);
        assert!((ch.noise() - 0.366_528_925_619_834_63).abs() < 1e-12);
    }

    #[test]
    fn scattering_matrix_frozen() {
        let p = SystemParams::new(0.1, 0.0).with_zeta(0.95);
        let s = dc_scattering(&p).unwrap().quadrature;
        let expect = [
            ((0, 0), -0.727_272_727_272_727_1),
            ((0, 2), -0.396_263_540_321_879_5),
            ((0, 5), -0.546_211_595_847_265_4),
            ((0, 7), -0.125_309_534_109_911_14),
            ((2, 2), 0.909_090_909_090_909),
            ((2, 7), -0.028_747_978_728_803_48),
            ((1, 4), 0.546_211_595_847_265_4),
        ];
        for ((r, c), v) in expect {
            assert!((s[(r, c)] - v).abs() < 1e-12, "S_x[{r},{c}] = {}", s[(r, c)]);
        }
    }

    #[test]
    fn squeeze_gap() {
        let p = fig2(Direction::MicrowaveToOptical, SqueezeSite::Microwave, 0.1);
        let gap = dc_noise_squeeze_gap(&p).unwrap();
        assert!((gap - 0.217_283_950_617_284).abs() < 1e-9);
        assert!((dc_noise_squeeze_gap_closed(&p).unwrap() - gap).abs() < 1e-12);
        assert!(dc_noise_squeeze_gap(&p.with_zeta(1.0)).unwrap().abs() < 1e-12);
        assert!(dc_noise_squeeze_gap(&p.with_squeezing(0.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn stability_examples() {
        assert!(dc_stable(&SystemParams::new(0.1, 0.3)));
        assert!(dc_stable(&SystemParams::new(5.0, 0.0)));
        assert!(!dc_stable(&SystemParams::new(0.1, 1.21 / 4.0)));
        assert!(matches!(
            dc_channel(&SystemParams::new(0.1, 0.31)),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn produced_pairs_are_physical() {
        for d in [Direction::MicrowaveToOptical, Direction::OpticalToMicrowave] {
            for s in [SqueezeSite::Microwave, SqueezeSite::Optical] {
                let (t, n) = dc_channel_matrices(&fig2(d, s, 0.2)).unwrap();
                assert!(validate_channel_pair(&t, &n));
            }
        }
    }
}
