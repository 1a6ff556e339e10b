//! Command-line front end for the transduction models.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use transduction::config::{RunConfig, Settings};
use transduction::output::{boundary_table, metadata, optimal_cv_table, sweep_table, Cell, Table};
use transduction::sweep::{optimal_cv_boundary, run_sweep, trace_optimal_cv, zero_rate_boundary, Axis};
use transduction::{selfcheck, Error, SystemParams};

#[derive(Parser)]
#[command(name = "transduce", version, about = "Microwave-optical transduction channel models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Direct-conversion channel at one parameter point.
    DcPoint(Flags),
    /// Teleportation channel at one parameter point, gains optimised.
    TpPoint(Flags),
    /// Evaluate metrics over a parameter grid.
    Sweep(Flags),
    /// Trace the optimal squeezing level along C_g or zeta.
    OptimalCv(Flags),
    /// Zero-rate boundary in the (zeta, C_v) plane.
    Boundary(Flags),
    /// Coherent and cat state fidelities over a grid.
    FidelitySurface(Flags),
    /// Run the closed-form/pipeline consistency suite.
    Selfcheck(SelfcheckFlags),
}

#[derive(Args, Default)]
struct Flags {
    /// Transduction scheme: dc or tp.
    #[arg(long)]
    scheme: Option<String>,
    /// Direction: mo (microwave to optical) or om.
    #[arg(long)]
    direction: Option<String>,
    /// Squeezed mode: ms (microwave) or os (optical).
    #[arg(long)]
    squeeze: Option<String>,
    /// Cooperativity C_g: value or start:stop:count[:log].
    #[arg(long)]
    cg: Option<String>,
    /// Squeezing level C_v: value or grid.
    #[arg(long)]
    cv: Option<String>,
    /// Common extraction efficiency for both modes.
    #[arg(long)]
    zeta: Option<String>,
    /// Optical extraction efficiency.
    #[arg(long = "zeta-o")]
    zeta_o: Option<String>,
    /// Microwave extraction efficiency (defaults to zeta-o).
    #[arg(long = "zeta-m")]
    zeta_m: Option<String>,
    /// Thermal photons in the microwave bath.
    #[arg(long)]
    nin: Option<String>,
    /// Squeezing phase in radians.
    #[arg(long)]
    theta: Option<String>,
    /// Amplitude of the fidelity test states.
    #[arg(long)]
    alpha: Option<String>,
    /// Gain objective: qlb, fidelity or match-eta=<v|dc>.
    #[arg(long)]
    objective: Option<String>,
    /// Comma list of eta,noise,q_lb,q_ub,rci,fidelity_coherent,fidelity_cat.
    #[arg(long)]
    metrics: Option<String>,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<String>,
    /// Ceiling for reported rates.
    #[arg(long = "rate-cap")]
    rate_cap: Option<String>,
    /// Rate below which a point counts as zero-rate.
    #[arg(long = "zero-threshold")]
    zero_threshold: Option<String>,
    /// Teleportation gain region: thermal-loss or unrestricted.
    #[arg(long = "gain-domain")]
    gain_domain: Option<String>,
    /// Axis for optimal-cv: cg or zeta.
    #[arg(long)]
    axis: Option<String>,
    /// For boundary: maximise over C_v instead of sweeping it.
    #[arg(long = "optimal-cv")]
    optimal_cv: bool,
}

#[derive(Args)]
struct SelfcheckFlags {
    /// Random parameter sets per check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Seed of the parameter generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl Flags {
    fn settings(&self) -> Result<Settings, Error> {
        let mut s = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let pairs = [
            ("scheme", &self.scheme),
            ("direction", &self.direction),
            ("squeeze", &self.squeeze),
            ("cg", &self.cg),
            ("cv", &self.cv),
            ("zeta", &self.zeta),
            ("zeta-o", &self.zeta_o),
            ("zeta-m", &self.zeta_m),
            ("nin", &self.nin),
            ("theta", &self.theta),
            ("alpha", &self.alpha),
            ("objective", &self.objective),
            ("metrics", &self.metrics),
            ("out", &self.out),
            ("format", &self.format),
            ("threads", &self.threads),
            ("rate-cap", &self.rate_cap),
            ("zero-threshold", &self.zero_threshold),
            ("gain-domain", &self.gain_domain),
            ("axis", &self.axis),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        if self.optimal_cv {
            s.set("optimal-cv", "true")?;
        }
        Ok(s)
    }
}

fn force_scheme(s: &mut Settings, scheme: &str) -> Result<(), Error> {
    match s.get("scheme") {
        Some(v) if v != scheme => Err(Error::Config(format!(
            "this subcommand fixes scheme = {scheme}, got {v}"
        ))),
        _ => s.set("scheme", scheme),
    }
}

fn require_point(cfg: &RunConfig) -> Result<(), Error> {
    let r = &cfg.request;
    let grids = [("cg", Some(r.cg)), ("cv", Some(r.cv)), ("zeta-o", Some(r.zeta_o)), ("zeta-m", r.zeta_m)];
    for (name, g) in grids {
        if g.is_some_and(|g| !g.is_point()) {
            return Err(Error::Config(format!("{name} must be a single value for a point query")));
        }
    }
    Ok(())
}

fn base_params(cfg: &RunConfig) -> SystemParams {
    let r = &cfg.request;
    let zo = r.zeta_o.start;
    SystemParams::new(r.cg.start, r.cv.start)
        .with_extraction(zo, r.zeta_m.map_or(zo, |g| g.start))
        .with_thermal(r.n_in)
        .with_theta(r.theta)
        .with_squeeze_at(r.squeeze_at)
        .with_direction(r.direction)
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), Error> {
    let req = &cfg.request;
    let meta = metadata(&req.to_settings(), req.rate_cap, req.zero_rate_threshold);
    let io_err = |e: io::Error| Error::Config(format!("cannot write output: {e}"));
    match &cfg.out {
        Some(path) => {
            let f = File::create(path).map_err(io_err)?;
            let mut w = BufWriter::new(f);
            table.write(cfg.format, meta, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => table.write(cfg.format, meta, io::stdout().lock()).map_err(io_err),
    }
}

fn run_table(command: &Command) -> Result<(), Error> {
    let (flags, fixed_scheme) = match command {
        Command::DcPoint(f) => (f, Some("dc")),
        Command::TpPoint(f) => (f, Some("tp")),
        Command::Sweep(f) | Command::OptimalCv(f) | Command::Boundary(f) | Command::FidelitySurface(f) => (f, None),
        Command::Selfcheck(_) => unreachable!("handled separately"),
    };
    let mut settings = flags.settings()?;
    if let Some(s) = fixed_scheme {
        force_scheme(&mut settings, s)?;
    }
    if let Command::FidelitySurface(_) = command {
        if settings.get("metrics").is_none() {
            settings.set("metrics", "fidelity_coherent,fidelity_cat")?;
        }
        if settings.get("objective").is_none() {
            settings.set("objective", "fidelity")?;
        }
    }
    let cfg = RunConfig::from_settings(&settings)?;
    let req = &cfg.request;
    let table = match command {
        Command::DcPoint(_) | Command::TpPoint(_) => {
            require_point(&cfg)?;
            sweep_table(&run_sweep(req, cfg.threads)?, &req.metrics)
        }
        Command::Sweep(_) | Command::FidelitySurface(_) => {
            sweep_table(&run_sweep(req, cfg.threads)?, &req.metrics)
        }
        Command::OptimalCv(_) => {
            let (name, grid) = match cfg.axis {
                Axis::Coop => ("cg", req.cg),
                Axis::Zeta => ("zeta", req.zeta_o),
            };
            let pts = trace_optimal_cv(
                req.scheme,
                &base_params(&cfg),
                cfg.axis,
                &grid,
                &req.gain_search,
                req.rate_cap,
                cfg.threads,
            )?;
            optimal_cv_table(name, &pts)
        }
        Command::Boundary(_) => {
            let base = base_params(&cfg);
            if cfg.optimal_cv {
                let zs = optimal_cv_boundary(
                    req.scheme,
                    &base,
                    &req.zeta_o,
                    req.zero_rate_threshold,
                    &req.gain_search,
                    req.rate_cap,
                    cfg.threads,
                )?;
                Table {
                    columns: vec!["zeta".into()],
                    rows: zs.into_iter().map(|z| vec![Cell::Float(Some(z))]).collect(),
                }
            } else {
                let pts = zero_rate_boundary(
                    req.scheme,
                    &base,
                    &req.zeta_o,
                    &req.cv,
                    req.zero_rate_threshold,
                    &req.gain_search,
                    cfg.threads,
                )?;
                boundary_table(&pts)
            }
        }
        Command::Selfcheck(_) => unreachable!(),
    };
    emit(&cfg, &table)
}

fn selfcheck_cmd(flags: &SelfcheckFlags) -> Result<bool, Error> {
    let outcomes = selfcheck::run(flags.samples, flags.seed)?;
    let mut all = true;
    for c in &outcomes {
        all &= c.passed;
        println!(
            "{} {} (samples {}, worst {:.3e}, tolerance {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.samples,
            c.worst,
            c.tolerance
        );
    }
    println!("{}", json!({ "passed": all, "checks": outcomes.len() }));
    Ok(all)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Selfcheck(flags) => selfcheck_cmd(flags).map(|ok| if ok { 0 } else { 4 }),
        other => run_table(other).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
