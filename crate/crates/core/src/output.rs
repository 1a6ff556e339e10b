//! CSV and JSON emission of tabular results.
//!
//! Floats are rounded to 12 significant digits and printed in the shortest
//! form that round-trips, so repeated runs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::sweep::{BoundaryPoint, Metric, OptimalCvPoint, SweepRecord};
use crate::{Error, Result};

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of a float for CSV cells.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    // Debug picks exponent notation only for very large or small values
    format!("{r:?}")
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(Option<f64>),
    Int(Option<usize>),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(Some(x)) => format_float(*x),
            Cell::Int(Some(n)) => n.to_string(),
            Cell::Float(None) | Cell::Int(None) => String::new(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(Some(x)) if x.is_finite() => json!(round_sig(*x)),
            Cell::Float(Some(x)) => Value::String(format_float(*x)),
            Cell::Int(Some(n)) => json!(n),
            Cell::Float(None) | Cell::Int(None) => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// Named columns with rows of cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// `{"metadata": ..., "records": [...]}`.
    pub fn to_json(&self, metadata: Value) -> Value {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({ "metadata": metadata, "records": records })
    }

    pub fn write(&self, format: Format, metadata: Value, mut w: impl Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json(metadata))?;
                writeln!(w)
            }
        }
    }
}

/// Run metadata attached to JSON output.
pub fn metadata(settings: &BTreeMap<String, String>, rate_cap: f64, threshold: f64) -> Value {
    json!({
        "request": settings,
        "rate_cap": rate_cap,
        "zero_rate_threshold": threshold,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Table of sweep records with a column per requested metric.
pub fn sweep_table(records: &[SweepRecord], metrics: &[Metric]) -> Table {
    let mut columns: Vec<String> = [
        "scheme",
        "direction",
        "squeeze",
        "cg",
        "cv",
        "zeta_o",
        "zeta_m",
        "n_in",
        "theta",
        "status",
    ]
    .map(String::from)
    .to_vec();
    for m in metrics {
        columns.push(m.name().into());
        if *m == Metric::Noise {
            columns.push("nbar".into());
        }
    }
    columns.extend(["kappa_q", "kappa_p", "evaluations", "plateau"].map(String::from));

    let rows = records
        .iter()
        .map(|r| {
            let p = &r.params;
            let mut row = vec![
                Cell::Text(r.scheme.to_string()),
                Cell::Text(p.direction.to_string()),
                Cell::Text(p.squeeze_at.to_string()),
                Cell::Float(Some(p.coop)),
                Cell::Float(Some(p.squeezing)),
                Cell::Float(Some(p.zeta_o)),
                Cell::Float(Some(p.zeta_m)),
                Cell::Float(Some(p.n_in)),
                Cell::Float(Some(p.theta)),
                Cell::Text(r.status.to_string()),
            ];
            for m in metrics {
                row.push(Cell::Float(r.metric(*m)));
                if *m == Metric::Noise {
                    row.push(Cell::Float(r.nbar));
                }
            }
            row.extend([
                Cell::Float(r.kappa_q),
                Cell::Float(r.kappa_p),
                Cell::Int(r.evaluations),
                Cell::Bool(r.plateau),
            ]);
            row
        })
        .collect();
    Table { columns, rows }
}

/// Table of an optimal-squeezing trace.
pub fn optimal_cv_table(axis: &str, points: &[OptimalCvPoint]) -> Table {
    Table {
        columns: vec![axis.into(), "cv_opt".into(), "rate".into(), "capped".into()],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Float(Some(p.axis_value)),
                    Cell::Float(p.cv_opt),
                    Cell::Float(Some(p.rate)),
                    Cell::Bool(p.capped),
                ]
            })
            .collect(),
    }
}

/// Table of a zero-rate contour.
pub fn boundary_table(points: &[BoundaryPoint]) -> Table {
    Table {
        columns: vec!["cv".into(), "zeta".into()],
        rows: points
            .iter()
            .map(|p| vec![Cell::Float(Some(p.cv)), Cell::Float(Some(p.zeta))])
            .collect(),
    }
}
