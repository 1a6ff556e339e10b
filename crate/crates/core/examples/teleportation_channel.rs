//! Entangled resource, optimised teleportation gains and the equivalent
//! squeezer/beam-splitter circuit of the teleported channel.
//!
//! ```text
//! cargo run --example teleportation_channel
//! ```

use transduction::capacity::{q_lb, q_ub, rci_from_covariance};
use transduction::tp::{
    entangled_covariance, standard_form, optimize_gains, tp_equivalent_decomposition, GainObjective,
    GainSearch,
};
use transduction::{Result, SystemParams};

fn main() -> Result<()> {
    let p = SystemParams::new(0.1, 0.1).with_zeta(0.975).with_thermal(0.1);
    let cov = entangled_covariance(&p)?;
    let form = standard_form(&cov, &p)?;
    println!("standard form: {form:#?}");
    println!("reverse coherent information: {:.4}", rci_from_covariance(&cov, p.direction)?);

    let sol = optimize_gains(&form, p.direction, GainObjective::MaxLowerBound, &GainSearch::default())?;
    let ch = sol.channel;
    println!(
        "\noptimal gains kappa_q = {:.5}, kappa_p = {:.5} ({} evaluations)",
        sol.gains.kappa_q, sol.gains.kappa_p, sol.evaluations
    );
    println!("channel: {} eta = {:.6}, N = {:.6}, Q_LB = {:.4}, Q_UB = {:.4}", ch.class(), ch.eta(), ch.noise(), q_lb(&ch), q_ub(&ch));

    // below unit gain the teleported channel is a squeezed thermal-loss channel
    let lossy = optimize_gains(&form, p.direction, GainObjective::MatchEta(0.8), &GainSearch::default())?;
    let circuit = tp_equivalent_decomposition(&form, lossy.gains, p.direction)?;
    println!("\nat eta = 0.8: {circuit:#?}");
    Ok(())
}
