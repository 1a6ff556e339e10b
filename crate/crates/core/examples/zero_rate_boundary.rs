//! Extraction efficiency needed for a non-zero rate: the teleportation
//! boundary without squeezing and the direct-conversion boundary with the
//! best squeezing at each efficiency.
//!
//! ```text
//! cargo run --release --example zero_rate_boundary
//! ```

use transduction::sweep::{optimal_cv_boundary, zero_rate_boundary, Grid};
use transduction::tp::GainSearch;
use transduction::{Result, Scheme, SystemParams};

fn main() -> Result<()> {
    let base = SystemParams::new(0.1, 0.0).with_thermal(0.1);
    let search = GainSearch::default();
    let zetas = Grid::linear(0.8, 1.0, 41)?;
    let threshold = 0.01;

    let tp = zero_rate_boundary(
        Scheme::Teleportation,
        &base,
        &zetas,
        &Grid::linear(0.0, 0.18, 7)?,
        threshold,
        &search,
        None,
    )?;
    println!("teleportation, rate < {threshold} below:");
    for b in &tp {
        println!("  C_v = {:.3}: zeta = {:.4}", b.cv, b.zeta);
    }

    let dc = optimal_cv_boundary(Scheme::DirectConversion, &base, &zetas, threshold, &search, 60.0, None)?;
    println!("direct conversion with optimal C_v: zeta = {dc:.4?}");
    Ok(())
}
