//! Which mode to squeeze: added noise of direct conversion with microwave
//! (ms) or optical (os) squeezing, in both directions.
//!
//! ```text
//! cargo run --example squeezing_choice
//! ```

use transduction::dc::{dc_channel, dc_noise_squeeze_gap_closed};
use transduction::{Direction, Result, SqueezeSite, SystemParams};

fn main() -> Result<()> {
    let base = SystemParams::new(0.1, 0.0).with_extraction(0.9, 0.95).with_thermal(0.1);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>12}", "C_v", "mo/ms", "mo/os", "om/ms", "om/os", "gap (mo)");
    for k in 0..=14 {
        let p = base.with_squeezing(0.02 * k as f64);
        let noise = |site, dir| dc_channel(&p.with_squeeze_at(site).with_direction(dir)).map(|c| c.noise());
        println!(
            "{:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>12.6}",
            p.squeezing,
            noise(SqueezeSite::Microwave, Direction::MicrowaveToOptical)?,
            noise(SqueezeSite::Optical, Direction::MicrowaveToOptical)?,
            noise(SqueezeSite::Microwave, Direction::OpticalToMicrowave)?,
            noise(SqueezeSite::Optical, Direction::OpticalToMicrowave)?,
            dc_noise_squeeze_gap_closed(&p)?
        );
    }
    Ok(())
}
