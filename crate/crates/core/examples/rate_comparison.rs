//! Capacity bounds of direct conversion and gain-optimised teleportation
//! as the squeezing level grows.
//!
//! ```text
//! cargo run --release --example rate_comparison [C_g] [zeta]
//! ```

use transduction::capacity::{q_lb, q_ub};
use transduction::dc::dc_channel;
use transduction::sweep::stable_cv_limit;
use transduction::tp::{entangled_form, optimize_gains, GainObjective, GainSearch};
use transduction::{Result, Scheme, SystemParams};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let coop = args.next().unwrap_or(0.1);
    let zeta = args.next().unwrap_or(0.975);
    let base = SystemParams::new(coop, 0.0).with_zeta(zeta).with_thermal(0.1);
    let edge = stable_cv_limit(Scheme::Teleportation, coop).unwrap_or(0.0);

    println!("C_g = {coop}, zeta = {zeta}, n_in = 0.1; teleportation stable for C_v < {edge:.4}");
    println!("{:>8} {:>9} {:>9} {:>9} {:>9}", "C_v", "DC LB", "DC UB", "TP LB", "TP UB");
    for k in 0..20 {
        let p = base.with_squeezing(edge * k as f64 / 20.0);
        let dc = dc_channel(&p)?;
        let sol = optimize_gains(&entangled_form(&p)?, p.direction, GainObjective::MaxLowerBound, &GainSearch::default())?;
        println!(
            "{:>8.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            p.squeezing,
            q_lb(&dc),
            q_ub(&dc),
            sol.objective,
            q_ub(&sol.channel)
        );
    }
    Ok(())
}
