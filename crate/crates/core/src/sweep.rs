//! Parameter sweeps, optimal-squeezing curves and zero-rate boundaries.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{q_lb, q_ub, rci_from_covariance, RATE_CAP};
use crate::dc::{dc_channel, dc_eta_closed};
use crate::fidelity::{fidelity_cat, fidelity_coherent, InputState, Parity};
use crate::gaussian::GaussianChannel;
use crate::optimize::scan_refine;
use crate::params::{Direction, Scheme, SqueezeSite, SystemParams};
use crate::scattering::is_stable;
use crate::tp::{entangled_covariance, optimize_gains, standard_form, GainDomain, GainObjective, GainSearch};
use crate::{Error, Result};

/// Spacing of grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Spacing {
    Linear,
    Log,
}

/// One sweep axis: `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
            spacing: Spacing::Linear,
        }
    }

    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = Self {
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        };
        g.validate("grid")?;
        Ok(g)
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = Self {
            start,
            stop,
            count,
            spacing: Spacing::Log,
        };
        g.validate("grid")?;
        Ok(g)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let bad = |why: &str| Err(Error::Config(format!("{name} grid {self}: {why}")));
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("bounds must be finite");
        }
        if self.start > self.stop {
            return bad("start must not exceed stop");
        }
        if self.count == 1 && self.start != self.stop {
            return bad("a single-point grid needs start = stop");
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return bad("log spacing needs a positive start");
        }
        Ok(())
    }

    pub fn is_point(&self) -> bool {
        self.count == 1
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / n;
                if k == self.count - 1 {
                    return self.stop;
                }
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 && self.start == self.stop {
            return write!(f, "{}", self.start);
        }
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)?;
        if self.spacing == Spacing::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `x` for a single point, or `start:stop:count[:lin|:log]`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |why: String| Error::Config(format!("invalid grid '{s}': {why}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| err(format!("{t}: {e}")));
        let parts: Vec<&str> = s.split(':').collect();
        let g = match parts.as_slice() {
            [x] => Grid::point(num(x)?),
            [a, b, n, rest @ ..] if rest.len() <= 1 => {
                let count = n.trim().parse::<usize>().map_err(|e| err(format!("{n}: {e}")))?;
                let spacing = match rest.first().map(|t| t.trim()) {
                    None | Some("lin") | Some("linear") => Spacing::Linear,
                    Some("log") => Spacing::Log,
                    Some(other) => return Err(err(format!("unknown spacing '{other}'"))),
                };
                Grid {
                    start: num(a)?,
                    stop: num(b)?,
                    count,
                    spacing,
                }
            }
            _ => return Err(err("expected x or start:stop:count[:log]".into())),
        };
        g.validate("")?;
        Ok(g)
    }
}

/// Quantity computed at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Metric {
    Eta,
    Noise,
    QLb,
    QUb,
    Rci,
    FidelityCoherent,
    FidelityCat,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Eta,
        Metric::Noise,
        Metric::QLb,
        Metric::QUb,
        Metric::Rci,
        Metric::FidelityCoherent,
        Metric::FidelityCat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Eta => "eta",
            Metric::Noise => "noise",
            Metric::QLb => "q_lb",
            Metric::QUb => "q_ub",
            Metric::Rci => "rci",
            Metric::FidelityCoherent => "fidelity_coherent",
            Metric::FidelityCat => "fidelity_cat",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric '{s}'")))
    }
}

/// Parses a comma-separated metric list into canonical order.
pub fn parse_metrics(s: &str) -> Result<Vec<Metric>> {
    let mut out: Vec<Metric> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Config("metric list is empty".into()));
    }
    Ok(out)
}

/// Transmissivity target for the matched-η objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EtaTarget {
    Value(f64),
    /// The direct-conversion transmissivity at the same parameters.
    DirectConversion,
}

/// How teleportation gains are chosen at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TpObjective {
    LowerBound,
    Fidelity,
    MatchEta(EtaTarget),
}

impl fmt::Display for TpObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TpObjective::LowerBound => f.write_str("qlb"),
            TpObjective::Fidelity => f.write_str("fidelity"),
            TpObjective::MatchEta(EtaTarget::Value(v)) => write!(f, "match-eta={v}"),
            TpObjective::MatchEta(EtaTarget::DirectConversion) => f.write_str("match-eta=dc"),
        }
    }
}

impl FromStr for TpObjective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "qlb" => Ok(TpObjective::LowerBound),
            "fidelity" => Ok(TpObjective::Fidelity),
            other => {
                let target = other
                    .strip_prefix("match-eta=")
                    .ok_or_else(|| Error::Config(format!("unknown objective '{other}'")))?;
                if target == "dc" {
                    return Ok(TpObjective::MatchEta(EtaTarget::DirectConversion));
                }
                let v: f64 = target
                    .parse()
                    .map_err(|e| Error::Config(format!("match-eta target '{target}': {e}")))?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("match-eta target {v} must be positive")));
                }
                Ok(TpObjective::MatchEta(EtaTarget::Value(v)))
            }
        }
    }
}

/// A full sweep specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub scheme: Scheme,
    pub direction: Direction,
    pub squeeze_at: SqueezeSite,
    pub cg: Grid,
    pub cv: Grid,
    pub zeta_o: Grid,
    /// `None` ties `ζ_m` to `ζ_o`.
    pub zeta_m: Option<Grid>,
    pub n_in: f64,
    pub theta: f64,
    pub objective: TpObjective,
    pub metrics: Vec<Metric>,
    /// Real amplitude of the fidelity test states.
    pub alpha: f64,
    pub zero_rate_threshold: f64,
    pub rate_cap: f64,
    pub gain_search: GainSearch,
}

impl Default for SweepRequest {
    fn default() -> Self {
        Self {
            scheme: Scheme::DirectConversion,
            direction: Direction::MicrowaveToOptical,
            squeeze_at: SqueezeSite::Microwave,
            cg: Grid::point(0.1),
            cv: Grid::point(0.0),
            zeta_o: Grid::point(1.0),
            zeta_m: None,
            n_in: 0.0,
            theta: FRAC_PI_2,
            objective: TpObjective::LowerBound,
            metrics: vec![Metric::Eta, Metric::Noise, Metric::QLb, Metric::QUb],
            alpha: 2.0,
            zero_rate_threshold: 0.01,
            rate_cap: RATE_CAP,
            gain_search: GainSearch::default(),
        }
    }
}

impl SweepRequest {
    pub fn validate(&self) -> Result<()> {
        self.cg.validate("cg")?;
        self.cv.validate("cv")?;
        self.zeta_o.validate("zeta-o")?;
        if let Some(z) = &self.zeta_m {
            z.validate("zeta-m")?;
        }
        let check = |ok: bool, what: String| if ok { Ok(()) } else { Err(Error::Config(what)) };
        check(self.cg.start >= 0.0, format!("cg must be non-negative, got {}", self.cg))?;
        check(self.cv.start >= 0.0, format!("cv must be non-negative, got {}", self.cv))?;
        for (name, g) in [("zeta-o", Some(self.zeta_o)), ("zeta-m", self.zeta_m)] {
            if let Some(g) = g {
                check(g.start >= 0.0 && g.stop <= 1.0, format!("{name} must lie in [0, 1], got {g}"))?;
            }
        }
        check(self.n_in >= 0.0 && self.n_in.is_finite(), format!("nin must be non-negative, got {}", self.n_in))?;
        check(self.theta.is_finite(), format!("theta must be finite, got {}", self.theta))?;
        check(self.alpha.is_finite(), format!("alpha must be finite, got {}", self.alpha))?;
        check(!self.metrics.is_empty(), "no metrics requested".into())?;
        check(
            self.rate_cap > 0.0 && !self.rate_cap.is_nan(),
            format!("rate cap must be positive, got {}", self.rate_cap),
        )?;
        check(
            self.zero_rate_threshold >= 0.0 && self.zero_rate_threshold.is_finite(),
            format!("zero-rate threshold must be non-negative, got {}", self.zero_rate_threshold),
        )?;
        if self.metrics.contains(&Metric::FidelityCat) {
            InputState::cat(self.alpha, Parity::Even)?;
        }
        Ok(())
    }

    /// Grid points in row-major order over `(cg, cv, zeta_o, zeta_m)`.
    pub fn points(&self) -> Vec<SystemParams> {
        let zm = self.zeta_m.map(|g| g.values());
        let mut out = Vec::new();
        for &cg in &self.cg.values() {
            for &cv in &self.cv.values() {
                for &zo in &self.zeta_o.values() {
                    let zms = zm.clone().unwrap_or_else(|| vec![zo]);
                    for zmv in zms {
                        out.push(self.params(cg, cv, zo, zmv));
                    }
                }
            }
        }
        out
    }

    fn params(&self, cg: f64, cv: f64, zo: f64, zm: f64) -> SystemParams {
        SystemParams::new(cg, cv)
            .with_extraction(zo, zm)
            .with_thermal(self.n_in)
            .with_theta(self.theta)
            .with_squeeze_at(self.squeeze_at)
            .with_direction(self.direction)
    }

    /// Canonical `key = value` echo of the request.
    pub fn to_settings(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("scheme", self.scheme.to_string());
        put("direction", self.direction.to_string());
        put("squeeze", self.squeeze_at.to_string());
        put("cg", self.cg.to_string());
        put("cv", self.cv.to_string());
        put("zeta-o", self.zeta_o.to_string());
        put(
            "zeta-m",
            self.zeta_m.map_or_else(|| "zeta-o".to_string(), |g| g.to_string()),
        );
        put("nin", self.n_in.to_string());
        put("theta", self.theta.to_string());
        put("objective", self.objective.to_string());
        put(
            "metrics",
            self.metrics.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
        );
        put("alpha", self.alpha.to_string());
        put("zero-threshold", self.zero_rate_threshold.to_string());
        put("rate-cap", self.rate_cap.to_string());
        put("gain-domain", gain_domain_name(self.gain_search.domain).to_string());
        put("gain-bound", self.gain_search.log_bound.to_string());
        m
    }
}

pub(crate) fn gain_domain_name(d: GainDomain) -> &'static str {
    match d {
        GainDomain::ThermalLoss => "thermal-loss",
        GainDomain::Unrestricted => "unrestricted",
    }
}

/// Outcome class of a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Ok,
    Unstable,
    /// A rate exceeded the cap and was replaced by it.
    Capped,
    /// The lower bound is below the zero-rate threshold.
    NoRate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Unstable => "unstable",
            Status::Capped => "capped",
            Status::NoRate => "no_rate",
        })
    }
}

/// Everything computed at one sweep point. Metrics that were not requested
/// or do not apply are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub params: SystemParams,
    pub scheme: Scheme,
    pub status: Status,
    pub eta: Option<f64>,
    pub noise: Option<f64>,
    pub nbar: Option<f64>,
    pub q_lb: Option<f64>,
    pub q_ub: Option<f64>,
    pub rci: Option<f64>,
    pub fidelity_coherent: Option<f64>,
    pub fidelity_cat: Option<f64>,
    pub kappa_q: Option<f64>,
    pub kappa_p: Option<f64>,
    pub evaluations: Option<usize>,
    pub plateau: bool,
}

impl SweepRecord {
    fn empty(scheme: Scheme, params: SystemParams, status: Status) -> Self {
        Self {
            params,
            scheme,
            status,
            eta: None,
            noise: None,
            nbar: None,
            q_lb: None,
            q_ub: None,
            rci: None,
            fidelity_coherent: None,
            fidelity_cat: None,
            kappa_q: None,
            kappa_p: None,
            evaluations: None,
            plateau: false,
        }
    }

    pub fn metric(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Eta => self.eta,
            Metric::Noise => self.noise,
            Metric::QLb => self.q_lb,
            Metric::QUb => self.q_ub,
            Metric::Rci => self.rci,
            Metric::FidelityCoherent => self.fidelity_coherent,
            Metric::FidelityCat => self.fidelity_cat,
        }
    }
}

/// Evaluates one parameter point of `req`.
pub fn evaluate_point(req: &SweepRequest, p: &SystemParams) -> Result<SweepRecord> {
    p.validate()?;
    if !is_stable(req.scheme, p) {
        return Ok(SweepRecord::empty(req.scheme, *p, Status::Unstable));
    }
    let wants = |m: Metric| req.metrics.contains(&m);
    let alpha = Complex64::from(req.alpha);
    let mut rec = SweepRecord::empty(req.scheme, *p, Status::Ok);

    let channel = match req.scheme {
        Scheme::DirectConversion => dc_channel(p)?,
        Scheme::Teleportation => {
            let cov = entangled_covariance(p)?;
            let form = standard_form(&cov, p)?;
            let mut search = req.gain_search;
            let objective = match req.objective {
                TpObjective::LowerBound => {
                    search.fallback_eta = dc_eta_closed(p).ok();
                    GainObjective::MaxLowerBound
                }
                TpObjective::Fidelity => {
                    let state = if wants(Metric::FidelityCat) && !wants(Metric::FidelityCoherent) {
                        InputState::cat(req.alpha, Parity::Even)?
                    } else {
                        InputState::coherent(req.alpha)
                    };
                    GainObjective::MaxFidelity(state)
                }
                TpObjective::MatchEta(EtaTarget::Value(v)) => GainObjective::MatchEta(v),
                TpObjective::MatchEta(EtaTarget::DirectConversion) => {
                    GainObjective::MatchEta(dc_eta_closed(p)?)
                }
            };
            let sol = optimize_gains(&form, p.direction, objective, &search)?;
            rec.kappa_q = Some(sol.gains.kappa_q);
            rec.kappa_p = Some(sol.gains.kappa_p);
            rec.evaluations = Some(sol.evaluations);
            rec.plateau = sol.plateau;
            if wants(Metric::Rci) {
                rec.rci = Some(rci_from_covariance(&cov, p.direction)?);
            }
            if req.objective == TpObjective::Fidelity
                && wants(Metric::FidelityCoherent)
                && wants(Metric::FidelityCat)
            {
                // the cat state gets its own optimal gains
                let cat = InputState::cat(req.alpha, Parity::Even)?;
                let s = optimize_gains(&form, p.direction, GainObjective::MaxFidelity(cat), &search)?;
                rec.fidelity_cat = Some(s.objective);
            }
            sol.channel
        }
    };
    fill_channel_metrics(&mut rec, req, &channel, alpha)?;
    Ok(rec)
}

fn fill_channel_metrics(
    rec: &mut SweepRecord,
    req: &SweepRequest,
    ch: &GaussianChannel,
    alpha: Complex64,
) -> Result<()> {
    let wants = |m: Metric| req.metrics.contains(&m);
    if wants(Metric::Eta) {
        rec.eta = Some(ch.eta());
    }
    if wants(Metric::Noise) {
        rec.noise = Some(ch.noise());
        rec.nbar = ch.nbar();
    }
    if wants(Metric::QLb) {
        rec.q_lb = Some(q_lb(ch));
    }
    if wants(Metric::QUb) {
        rec.q_ub = Some(q_ub(ch));
    }
    if wants(Metric::FidelityCoherent) {
        rec.fidelity_coherent = Some(fidelity_coherent(ch, alpha));
    }
    if wants(Metric::FidelityCat) && rec.fidelity_cat.is_none() {
        rec.fidelity_cat = Some(fidelity_cat(ch, alpha, Parity::Even)?);
    }

    let mut capped = false;
    for rate in [&mut rec.q_lb, &mut rec.q_ub, &mut rec.rci].into_iter().flatten() {
        if *rate > req.rate_cap {
            *rate = req.rate_cap;
            capped = true;
        }
    }
    rec.status = if capped {
        Status::Capped
    } else if rec.q_lb.is_some_and(|q| q < req.zero_rate_threshold) {
        Status::NoRate
    } else {
        Status::Ok
    };
    Ok(())
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(Error::Config("thread count must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

/// Evaluates every grid point of `req`, in parallel, returning records in
/// row-major grid order.
pub fn run_sweep(req: &SweepRequest, threads: Option<usize>) -> Result<Vec<SweepRecord>> {
    req.validate()?;
    let points = req.points();
    with_threads(threads, || {
        points
            .par_iter()
            .map(|p| evaluate_point(req, p))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Largest `C_v` inside the stable region of `scheme` at cooperativity
/// `coop`, or `None` if no squeezing level is stable.
pub fn stable_cv_limit(scheme: Scheme, coop: f64) -> Option<f64> {
    let edge = match scheme {
        Scheme::DirectConversion => (1.0 + coop).powi(2) / 4.0,
        Scheme::Teleportation if coop < 1.0 => (1.0 - coop).powi(2) / 4.0,
        Scheme::Teleportation => return None,
    };
    Some(edge)
}

/// Capacity lower bound of `scheme` at `p`, with teleportation gains
/// optimised; zero outside the stable region.
pub fn optimal_lower_bound(scheme: Scheme, p: &SystemParams, search: &GainSearch) -> Result<f64> {
    if !is_stable(scheme, p) {
        return Ok(0.0);
    }
    match scheme {
        Scheme::DirectConversion => Ok(q_lb(&dc_channel(p)?)),
        Scheme::Teleportation => {
            let form = standard_form(&entangled_covariance(p)?, p)?;
            Ok(optimize_gains(&form, p.direction, GainObjective::MaxLowerBound, search)?.objective)
        }
    }
}

/// Axis swept by [`trace_optimal_cv`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    /// Interaction cooperativity `C_g`.
    Coop,
    /// Common extraction efficiency `ζ_o = ζ_m`.
    Zeta,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cg" => Ok(Axis::Coop),
            "zeta" => Ok(Axis::Zeta),
            other => Err(Error::Config(format!("unknown axis '{other}' (expected cg or zeta)"))),
        }
    }
}

/// Optimal squeezing at one axis point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalCvPoint {
    pub axis_value: f64,
    /// `None` when the rate vanishes for every stable `C_v`.
    pub cv_opt: Option<f64>,
    pub rate: f64,
    /// The rate reached the cap; `cv_opt` is then the edge of the searched
    /// range.
    pub capped: bool,
}

/// Fraction of the stable `C_v` range searched; the edge itself is
/// singular.
const CV_EDGE: f64 = 1.0 - 1e-9;

/// Maximises the optimal lower bound over the stable squeezing range.
pub fn optimal_cv(
    scheme: Scheme,
    p: &SystemParams,
    search: &GainSearch,
    rate_cap: f64,
) -> Result<OptimalCvPoint> {
    let none = |rate| OptimalCvPoint {
        axis_value: f64::NAN,
        cv_opt: None,
        rate,
        capped: false,
    };
    let Some(edge) = stable_cv_limit(scheme, p.coop) else {
        return Ok(none(0.0));
    };
    let hi = edge * CV_EDGE;
    let mut failure = None;
    let rate = |cv: f64| match optimal_lower_bound(scheme, &p.with_squeezing(cv), search) {
        Ok(r) => r.min(rate_cap),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let best = scan_refine(rate, 0.0, hi, 64, &[hi], 1e-9 * hi.max(1e-12));
    if let Some(e) = failure {
        return Err(e);
    }
    if !(best.value > 0.0) {
        return Ok(none(0.0));
    }
    let capped = best.value >= rate_cap;
    Ok(OptimalCvPoint {
        axis_value: f64::NAN,
        cv_opt: Some(if capped { hi } else { best.x }),
        rate: best.value,
        capped,
    })
}

/// Optimal squeezing along `axis` with all other parameters from `base`.
pub fn trace_optimal_cv(
    scheme: Scheme,
    base: &SystemParams,
    axis: Axis,
    grid: &Grid,
    search: &GainSearch,
    rate_cap: f64,
    threads: Option<usize>,
) -> Result<Vec<OptimalCvPoint>> {
    grid.validate("axis")?;
    base.validate()?;
    let values = grid.values();
    with_threads(threads, || {
        values
            .par_iter()
            .map(|&x| {
                let p = match axis {
                    Axis::Coop => base.with_coop(x),
                    Axis::Zeta => base.with_zeta(x),
                };
                p.validate()?;
                let pt = optimal_cv(scheme, &p, search, rate_cap)?;
                Ok(OptimalCvPoint { axis_value: x, ..pt })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

/// Points where a scalar function crosses `threshold` between adjacent
/// grid nodes, refined by bisection to `tol`.
fn crossings(
    f: impl Fn(f64) -> Result<f64> + Sync,
    nodes: &[f64],
    threshold: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let values: Vec<f64> = nodes.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let above = |v: f64| v >= threshold;
    let mut out = Vec::new();
    for k in 1..nodes.len() {
        if above(values[k - 1]) == above(values[k]) {
            continue;
        }
        let (mut lo, mut hi) = (nodes[k - 1], nodes[k]);
        let lo_above = above(values[k - 1]);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if above(f(mid)?) == lo_above {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// One vertex of a zero-rate contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub cv: f64,
    pub zeta: f64,
}

/// Resolution of boundary crossings in `ζ`.
pub const BOUNDARY_TOL: f64 = 1e-4;

/// Contour in the `(ζ, C_v)` plane where the (gain-optimised) lower bound
/// crosses `threshold`, with `ζ_o = ζ_m = ζ`. For each `C_v` node the
/// crossings along `ζ` are bisected to [`BOUNDARY_TOL`].
#[allow(clippy::too_many_arguments)]
pub fn zero_rate_boundary(
    scheme: Scheme,
    base: &SystemParams,
    zeta: &Grid,
    cv: &Grid,
    threshold: f64,
    search: &GainSearch,
    threads: Option<usize>,
) -> Result<Vec<BoundaryPoint>> {
    zeta.validate("zeta")?;
    cv.validate("cv")?;
    base.validate()?;
    let zs = zeta.values();
    with_threads(threads, || {
        let mut out = Vec::new();
        for c in cv.values() {
            let f = |z: f64| optimal_lower_bound(scheme, &base.with_zeta(z).with_squeezing(c), search);
            for z in crossings(f, &zs, threshold, BOUNDARY_TOL)? {
                out.push(BoundaryPoint { cv: c, zeta: z });
            }
        }
        Ok(out)
    })?
}

/// Values of `ζ` where the lower bound maximised over squeezing crosses
/// `threshold`.
pub fn optimal_cv_boundary(
    scheme: Scheme,
    base: &SystemParams,
    zeta: &Grid,
    threshold: f64,
    search: &GainSearch,
    rate_cap: f64,
    threads: Option<usize>,
) -> Result<Vec<f64>> {
    zeta.validate("zeta")?;
    base.validate()?;
    let zs = zeta.values();
    with_threads(threads, || {
        let f = |z: f64| Ok(optimal_cv(scheme, &base.with_zeta(z), search, rate_cap)?.rate);
        crossings(f, &zs, threshold, BOUNDARY_TOL)
    })?
}
