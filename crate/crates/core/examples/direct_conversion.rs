//! Direct-conversion channel for every squeezing site and direction,
//! computed from the scattering matrix and compared with the closed forms.
//!
//! ```text
//! cargo run --example direct_conversion
//! ```

use transduction::capacity::{q_lb, q_ub};
use transduction::dc::{dc_channel, dc_eta_closed, dc_noise_ms_mo_closed};
use transduction::{Direction, Result, SqueezeSite, SystemParams};

fn main() -> Result<()> {
    let base = SystemParams::new(0.5, 0.1).with_extraction(0.9, 0.95).with_thermal(0.1);
    println!("C_g = {}, C_v = {}, zeta_o = {}, zeta_m = {}, n_in = {}\n", base.coop, base.squeezing, base.zeta_o, base.zeta_m, base.n_in);
    println!("{:<4} {:<4} {:>10} {:>10} {:>10} {:>8} {:>8}", "sq", "dir", "eta", "N", "nbar", "Q_LB", "Q_UB");
    for site in [SqueezeSite::Microwave, SqueezeSite::Optical] {
        for dir in [Direction::MicrowaveToOptical, Direction::OpticalToMicrowave] {
            let p = base.with_squeeze_at(site).with_direction(dir);
            let ch = dc_channel(&p)?;
            println!(
                "{site:<4} {dir:<4} {:>10.6} {:>10.6} {:>10.6} {:>8.4} {:>8.4}",
                ch.eta(),
                ch.noise(),
                ch.nbar().unwrap_or(f64::NAN),
                q_lb(&ch),
                q_ub(&ch)
            );
        }
    }
    println!("\nclosed forms: eta = {:.6}, N (ms, m->o) = {:.6}", dc_eta_closed(&base)?, dc_noise_ms_mo_closed(&base)?);
    Ok(())
}
