//! Flat `key = value` run configuration.
//!
//! ```text
//! # teleportation rates against squeezing
//! scheme = tp
//! cg = 0.1
//! cv = 0:0.2:41
//! zeta = 0.975
//! nin = 0.1
//! ```
//!
//! Keys use the command-line flag spelling (`zeta-o`, `rate-cap`);
//! underscores are accepted in place of dashes. `zeta` sets both
//! efficiencies.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::output::Format;
use crate::sweep::{parse_metrics, Axis, Grid, SweepRequest};
use crate::tp::GainDomain;
use crate::{Error, Result};

/// Every recognised key.
pub const KEYS: [&str; 22] = [
    "scheme",
    "direction",
    "squeeze",
    "cg",
    "cv",
    "zeta",
    "zeta-o",
    "zeta-m",
    "nin",
    "theta",
    "alpha",
    "objective",
    "metrics",
    "out",
    "format",
    "threads",
    "rate-cap",
    "zero-threshold",
    "gain-domain",
    "gain-bound",
    "axis",
    "optimal-cv",
];

/// Raw settings, later overlaid by command-line flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = normalize(k);
            if s.values.contains_key(&key) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
            }
            s.set(&key, v.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets `key`, replacing any earlier value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = normalize(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key, value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("{key} = '{v}': {e}")))
            })
            .transpose()
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub request: SweepRequest,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub axis: Axis,
    /// Boundary runs maximise over squeezing instead of sweeping it.
    pub optimal_cv: bool,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let mut req = SweepRequest::default();
        if let Some(v) = s.parsed("scheme")? {
            req.scheme = v;
        }
        if let Some(v) = s.parsed("direction")? {
            req.direction = v;
        }
        if let Some(v) = s.parsed("squeeze")? {
            req.squeeze_at = v;
        }
        if let Some(v) = s.parsed::<Grid>("cg")? {
            req.cg = v;
        }
        if let Some(v) = s.parsed::<Grid>("cv")? {
            req.cv = v;
        }
        if let Some(v) = s.parsed::<Grid>("zeta")? {
            req.zeta_o = v;
            req.zeta_m = None;
        }
        if let Some(v) = s.parsed::<Grid>("zeta-o")? {
            req.zeta_o = v;
        }
        if let Some(v) = s.parsed::<Grid>("zeta-m")? {
            req.zeta_m = Some(v);
        }
        if let Some(v) = s.parsed("nin")? {
            req.n_in = v;
        }
        if let Some(v) = s.parsed("theta")? {
            req.theta = v;
        }
        if let Some(v) = s.parsed("alpha")? {
            req.alpha = v;
        }
        if let Some(v) = s.parsed("objective")? {
            req.objective = v;
        }
        if let Some(v) = s.get("metrics") {
            req.metrics = parse_metrics(v)?;
        }
        if let Some(v) = s.parsed("rate-cap")? {
            req.rate_cap = v;
        }
        if let Some(v) = s.parsed("zero-threshold")? {
            req.zero_rate_threshold = v;
        }
        if let Some(v) = s.get("gain-domain") {
            req.gain_search.domain = match v {
                "thermal-loss" => GainDomain::ThermalLoss,
                "unrestricted" => GainDomain::Unrestricted,
                other => return Err(Error::Config(format!("unknown gain domain '{other}'"))),
            };
        }
        if let Some(v) = s.parsed::<f64>("gain-bound")? {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("gain-bound must be positive, got {v}")));
            }
            req.gain_search.log_bound = v;
        }
        req.validate()?;
        let threads = s.parsed::<usize>("threads")?;
        if threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(RunConfig {
            request: req,
            format: s.parsed("format")?.unwrap_or(Format::Csv),
            out: s.get("out").map(PathBuf::from),
            threads,
            axis: s.parsed("axis")?.unwrap_or(Axis::Coop),
            optimal_cv: s.parsed("optimal-cv")?.unwrap_or(false),
        })
    }
}
