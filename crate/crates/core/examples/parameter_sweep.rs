//! A grid sweep through the library API, written as CSV to stdout. The
//! `transduce sweep` subcommand does the same from the command line.
//!
//! ```text
//! cargo run --release --example parameter_sweep
//! ```

use std::io;

use transduction::output::{metadata, sweep_table, Format};
use transduction::sweep::{parse_metrics, run_sweep, Grid, SweepRequest};
use transduction::{Result, Scheme};

fn main() -> Result<()> {
    let req = SweepRequest {
        scheme: Scheme::Teleportation,
        cg: Grid::log(0.01, 0.5, 4)?,
        cv: Grid::linear(0.0, 0.2, 5)?,
        zeta_o: Grid::point(0.975),
        n_in: 0.1,
        metrics: parse_metrics("eta,noise,q_lb,q_ub,rci")?,
        ..SweepRequest::default()
    };
    let records = run_sweep(&req, None)?;
    let table = sweep_table(&records, &req.metrics);
    let meta = metadata(&req.to_settings(), req.rate_cap, req.zero_rate_threshold);
    table
        .write(Format::Csv, meta, io::stdout().lock())
        .map_err(|e| transduction::Error::Config(e.to_string()))
}
