//! Quantum-capacity bounds of single-mode Gaussian channels.
//!
//! ```text
//! cargo run --example capacity_bounds
//! ```

use transduction::capacity::{q_de, q_lb, q_plob, q_ub};
use transduction::{GaussianChannel, Result};

fn main() -> Result<()> {
    let channels = [
        ("pure loss, eta 0.9", GaussianChannel::thermal(0.9, 0.0)?),
        ("thermal loss, eta 0.9, nbar 0.1", GaussianChannel::thermal(0.9, 0.1)?),
        ("quantum-limited amplifier, gain 2", GaussianChannel::thermal(2.0, 0.0)?),
        ("thermal amplifier, gain 2, nbar 0.2", GaussianChannel::thermal(2.0, 0.2)?),
        ("additive noise 0.05", GaussianChannel::additive(0.05)?),
    ];
    println!("{:<38} {:>16} {:>8} {:>8} {:>8} {:>8}", "channel", "class", "Q_LB", "PLOB", "DE", "Q_UB");
    for (name, ch) in &channels {
        println!(
            "{name:<38} {:>16} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            ch.class().to_string(),
            q_lb(ch),
            q_plob(ch),
            q_de(ch),
            q_ub(ch)
        );
    }
    Ok(())
}
