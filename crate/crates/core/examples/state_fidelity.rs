//! Transfer fidelity of coherent and even cat states through both schemes,
//! with the closed forms checked against a direct Wigner-function overlap.
//!
//! ```text
//! cargo run --release --example state_fidelity
//! ```

use transduction::dc::dc_channel;
use transduction::fidelity::{fidelity, fidelity_numeric, InputState, Parity};
use transduction::tp::{entangled_form, optimize_gains, GainObjective, GainSearch};
use transduction::{Result, SystemParams};

fn main() -> Result<()> {
    let alpha = 2.0;
    let states = [("coherent", InputState::coherent(alpha)), ("even cat", InputState::cat(alpha, Parity::Even)?)];
    let base = SystemParams::new(0.0, 0.0).with_zeta(0.95).with_thermal(0.1);

    println!("alpha = {alpha}, zeta = 0.95, n_in = 0.1, C_v = 0.5 of the teleportation edge");
    println!("{:>5} {:<9} {:>8} {:>8} {:>10}", "C_g", "state", "DC", "TP", "|closed-numeric| (DC)");
    for coop in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let p = base.with_coop(coop).with_squeezing(0.5 * (1.0 - coop) * (1.0 - coop) / 4.0);
        let dc = dc_channel(&p)?;
        let form = entangled_form(&p)?;
        for (name, state) in &states {
            let f_dc = fidelity(&dc, state)?;
            let tp = optimize_gains(&form, p.direction, GainObjective::MaxFidelity(*state), &GainSearch::default())?;
            let check = (fidelity_numeric(state, &dc)? - f_dc).abs();
            println!("{coop:>5.1} {name:<9} {f_dc:>8.4} {:>8.4} {check:>10.1e}", tp.objective);
        }
    }
    Ok(())
}
