//! Largest real part among the roots of det G(α) = 0 against the analytic
//! stability conditions of both schemes.
//!
//! ```text
//! cargo run --example stability
//! ```

use transduction::dc::{dc_stability_root, dc_stable};
use transduction::tp::{tp_stability_root, tp_stable};
use transduction::{Result, SystemParams};

fn main() -> Result<()> {
    let coop = 0.3;
    let (dc_edge, tp_edge) = ((1.0 + coop) * (1.0 + coop) / 4.0, (1.0 - coop) * (1.0 - coop) / 4.0);
    println!("C_g = {coop}: DC stable for C_v < {dc_edge:.4}, TP stable for C_v < {tp_edge:.4}\n");
    println!("{:>8} {:>12} {:>7} {:>12} {:>7}", "C_v", "DC root", "stable", "TP root", "stable");
    for k in 0..=12 {
        let p = SystemParams::new(coop, 0.05 * k as f64);
        println!(
            "{:>8.3} {:>12.5} {:>7} {:>12.5} {:>7}",
            p.squeezing,
            dc_stability_root(&p)?,
            dc_stable(&p),
            tp_stability_root(&p)?,
            tp_stable(&p)
        );
    }
    println!("\nroot on the DC edge: {:.2e}", dc_stability_root(&SystemParams::new(coop, dc_edge))?);
    println!("root on the TP edge: {:.2e}", tp_stability_root(&SystemParams::new(coop, tp_edge))?);
    Ok(())
}
