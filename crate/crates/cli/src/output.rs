//! Output envelope and its CSV, JSON and table renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: &str = "1";
/// Significant digits in CSV and JSON.
pub const MACHINE_DIGITS: usize = 12;
/// Significant digits in the table view.
pub const TABLE_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

pub type Row = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub schema_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    /// Column order for `rows`.
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub diagnostics: BTreeMap<String, Value>,
}

impl OutputEnvelope {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            command: command.to_owned(),
            inputs: BTreeMap::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_owned(), value);
        self
    }

    pub fn diagnostic(&mut self, key: &str, value: Value) -> &mut Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    /// Appends a row given as `(column, value)` pairs; columns must be known.
    pub fn push_row(&mut self, cells: Vec<(&str, Value)>) {
        let row: Row = cells
            .into_iter()
            .map(|(k, v)| {
                debug_assert!(self.columns.iter().any(|c| c == k), "unknown column {k}");
                (k.to_owned(), v)
            })
            .collect();
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => self.write_csv(out)?,
            Format::Table => self.write_table(out)?,
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(self.columns.iter().map(|c| render(row.get(c), MACHINE_DIGITS)))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_table(&self, out: &mut dyn Write) -> Result<()> {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| self.columns.iter().map(|c| render(row.get(c), TABLE_DIGITS)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |out: &mut dyn Write, items: &[String]| -> std::io::Result<()> {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end())
        };
        line(out, &self.columns)?;
        for r in &cells {
            line(out, r)?;
        }
        if !self.diagnostics.is_empty() {
            writeln!(out)?;
            for (k, v) in &self.diagnostics {
                writeln!(out, "{k}: {}", render(Some(v), TABLE_DIGITS))?;
            }
        }
        Ok(())
    }
}

fn render(value: Option<&Value>, digits: usize) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => match n.as_f64() {
            Some(x) if n.is_f64() => format_sig(x, digits),
            _ => n.to_string(),
        },
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| render(Some(v), digits))
            .collect::<Vec<_>>()
            .join(" "),
        Some(other) => other.to_string(),
    }
}

/// Formats `x` with `sig` significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise, without trailing zeros.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

/// JSON number rounded to [`MACHINE_DIGITS`]; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format_sig(x, MACHINE_DIGITS).parse().expect("formatted float");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn count(n: u64) -> Value {
    Value::from(n)
}
