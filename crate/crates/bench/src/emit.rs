//! Table rendering.
//!
//! Both formats carry the same cells: a `section,method` key followed by one
//! column per sweep value in ascending order. Sections are `price`, `ci`
//! (MC half-width), `error` (MC minus method) and `rel_error`. Prices, CIs and
//! errors use 4 decimals; relative errors below 1e-3 switch to scientific
//! notation. A failed cell renders as `FAIL`, a missing one as `-`.
//! Timings are never written, so the files are reproducible.

use std::fmt::Write as _;

use crate::run::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Markdown => "md",
        }
    }
}

pub const FAIL: &str = "FAIL";
pub const MISSING: &str = "-";

pub fn fmt_fixed(v: f64) -> String {
    let s = format!("{v:.4}");
    // no "-0.0000"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn fmt_rel(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        fmt_fixed(v)
    }
}

fn axis_header(v: f64) -> String {
    format!("{v}")
}

/// Table cells, header first.
pub fn table_records(t: &ResultTable) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut header = vec!["section".to_string(), t.axis.name().to_string()];
    header.extend(t.values.iter().map(|v| axis_header(*v)));
    out.push(header);

    for r in &t.rows {
        let mut rec = vec!["price".to_string(), r.method.label().to_string()];
        rec.extend(r.prices.iter().map(|c| c.value().map(fmt_fixed).unwrap_or_else(|| FAIL.to_string())));
        out.push(rec);
    }
    if let Some(ci) = &t.mc_ci {
        let mut rec = vec!["ci".to_string(), "MC".to_string()];
        rec.extend(ci.iter().map(|v| v.map(fmt_fixed).unwrap_or_else(|| MISSING.to_string())));
        out.push(rec);
    }
    for (m, e) in &t.errors {
        let mut rec = vec!["error".to_string(), m.label().to_string()];
        rec.extend(e.iter().map(|v| v.map(fmt_fixed).unwrap_or_else(|| MISSING.to_string())));
        out.push(rec);
    }
    for (m, e) in &t.rel_errors {
        let mut rec = vec!["rel_error".to_string(), m.label().to_string()];
        rec.extend(e.iter().map(|v| v.map(fmt_rel).unwrap_or_else(|| MISSING.to_string())));
        out.push(rec);
    }
    out
}

pub fn emit_table(t: &ResultTable, format: Format) -> String {
    let recs = table_records(t);
    let mut s = String::new();
    match format {
        Format::Csv => {
            for r in &recs {
                let _ = writeln!(s, "{}", r.join(","));
            }
        }
        Format::Markdown => {
            for (i, r) in recs.iter().enumerate() {
                let _ = writeln!(s, "|{}|", r.join("|"));
                if i == 0 {
                    let _ = writeln!(s, "|{}|", vec!["---"; r.len()].join("|"));
                }
            }
        }
    }
    s
}
