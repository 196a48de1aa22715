//! CSV and JSON writers.
//!
//! Floats are written in shortest round-trip scientific notation (`{:e}`),
//! so reading a file back reproduces every value bit for bit. Missing values
//! are empty CSV cells or JSON `null`.

use std::io::{self, Write};

use crate::config::Format;
use crate::evaluate::Row;

pub const COLUMNS: [&str; 12] = [
    "lambda",
    "force",
    "f_omega",
    "f_gamma0",
    "f_omegaD",
    "regime",
    "oracle",
    "discrepancy",
    "warnings",
    "truncation",
    "casimir",
    "relative_weight",
];

fn float(x: f64) -> String {
    format!("{x:e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn record(row: &Row) -> [String; 12] {
    [
        float(row.lambda),
        float(row.force),
        optional(row.f_omega),
        optional(row.f_gamma0),
        optional(row.f_omega_d),
        row.regime.to_string(),
        optional(row.oracle),
        optional(row.discrepancy),
        row.warnings.join(";"),
        optional(row.truncation),
        optional(row.casimir),
        optional(row.relative_weight),
    ]
}

pub fn write_csv(rows: &[Row], out: impl Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()
}

pub fn write_json(rows: &[Row], mut out: impl Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}

pub fn write(rows: &[Row], format: Format, out: impl Write) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}
