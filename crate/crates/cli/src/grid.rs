//! Sweep axes and the row-major result table, with CSV and JSON writers.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::CliError;

/// Linearly spaced axis, written `name:start:stop:count` on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            return self.start;
        }
        if i + 1 == self.count {
            return self.stop;
        }
        // Weighted form hits round interior values exactly more often.
        let n = (self.count - 1) as f64;
        let i = i as f64;
        ((n - i) * self.start + i * self.stop) / n
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let usage = |why: &str| CliError::Usage(format!("bad axis '{s}': {why} (expected name:start:stop:count)"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(usage("need four fields"));
        };
        let start: f64 = start.parse().map_err(|_| usage("start is not a number"))?;
        let stop: f64 = stop.parse().map_err(|_| usage("stop is not a number"))?;
        let count: usize = count.parse().map_err(|_| usage("count is not a positive integer"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(usage("range must be finite"));
        }
        if count == 0 || (count == 1 && start != stop) {
            return Err(usage("count must be at least 2 (or 1 with start = stop)"));
        }
        Ok(Axis {
            name: name.to_string(),
            start,
            stop,
            count,
        })
    }
}

/// One table entry. `Undefined` marks quantities that do not exist at that
/// point, such as the concurrence when nothing is detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Undefined,
}

impl Cell {
    pub fn from_option(v: Option<f64>) -> Self {
        v.map_or(Cell::Undefined, Cell::Value)
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Undefined => None,
        }
    }

    fn csv(self) -> String {
        match self {
            Cell::Value(v) => format_float(v),
            Cell::Undefined => String::new(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Value(v) if v.is_finite() => json!(v),
            Cell::Value(v) => Value::String(format_float(v)),
            Cell::Undefined => Value::Null,
        }
    }
}

/// Shortest representation that parses back to the same `f64`; scientific
/// notation outside `[1e-5, 1e16)`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    /// Ordered `key=value` metadata.
    pub meta: Vec<(String, String)>,
    pub axes: Vec<Axis>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepGrid {
    pub fn expected_rows(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta: Vec<String> = self.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "# meta: {}", meta.join(";"));
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let axes: Vec<Value> = self
            .axes
            .iter()
            .map(|a| {
                json!({
                    "name": a.name,
                    "start": a.start,
                    "stop": a.stop,
                    "count": a.count,
                    "spacing": "linear",
                })
            })
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|c| c.json()).collect()))
            .collect();
        let doc = json!({
            "meta": meta,
            "axes": axes,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("grid serializes");
        s.push('\n');
        s
    }
}
