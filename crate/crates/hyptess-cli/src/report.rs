//! Run reports: a column-labeled table, pass/fail assertions and timing,
//! rendered as text, JSON or CSV.

use std::fmt;
use std::time::Instant;

use hyptess::reference::{Check, Comparison};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// A table cell.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn na() -> Self {
        Cell::Text("N/A".into())
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or_else(Cell::na, Cell::Num)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => f.write_str(&sig12(*x)),
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => f.write_str(if *b { "yes" } else { "no" }),
        }
    }
}

/// Formats a number with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

/// Hex SHA-256 of an input's bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Everything a command reports.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// Input name → SHA-256 (files) or literal value (parameters).
    pub inputs: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub assertions: Vec<Check>,
    pub wall_time_s: f64,
    pub passed: bool,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunReport {
    pub fn new(columns: &[&str]) -> Self {
        RunReport {
            command: std::env::args().collect(),
            inputs: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            assertions: Vec::new(),
            wall_time_s: 0.0,
            passed: true,
            started: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, name: &str, value: impl Into<String>) {
        self.inputs.push((name.into(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn check(&mut self, c: Check) {
        self.assertions.push(c);
    }

    pub fn checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.assertions.extend(cs);
    }

    /// Stops the clock and settles the overall verdict.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.wall_time_s = t.elapsed().as_secs_f64();
        }
        self.passed = self.assertions.iter().all(|c| c.pass);
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|k| cells.iter().map(|r| r[k].len()).chain([self.columns[k].len()]).max().unwrap_or(0))
            .collect();
        let line = |vals: &[String]| -> String {
            vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
        };
        if !self.columns.is_empty() {
            out += &line(&self.columns);
            out.push('\n');
            for r in &cells {
                out += &line(r);
                out.push('\n');
            }
        }
        if !self.assertions.is_empty() {
            out.push('\n');
        }
        for c in &self.assertions {
            let rel = match c.comparison {
                Comparison::Truncated => format!("in [{}, {} + {:e}]", sig12(c.published), sig12(c.published), c.tol),
                Comparison::Within => format!("= {} ± {:e}", sig12(c.published), c.tol),
                Comparison::Below => format!("< {}", sig12(c.published)),
                Comparison::Above => format!("> {}", sig12(c.published)),
            };
            out += &format!("{} {}: {} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, sig12(c.computed), rel);
        }
        out += &format!(
            "\n{} ({} of {} assertions passed, {:.3} s)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.assertions.iter().filter(|c| c.pass).count(),
            self.assertions.len(),
            self.wall_time_s
        );
        out
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.to_string()))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Shorthand for exact count comparisons.
pub fn count_check(name: impl Into<String>, computed: usize, expected: usize) -> Check {
    Check::new(name, computed as f64, expected as f64, Comparison::Within, 0.0)
}
