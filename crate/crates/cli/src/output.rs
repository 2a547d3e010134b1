//! CSV and JSON emission. Numbers carry 12 significant digits.

use std::io::{Read, Write};

use ces_duality::verify::VerificationReport;
use serde::Serialize;

use crate::CliError;

/// `x` with 12 significant digits, scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// `x` rounded to the digits [`fmt_num`] prints.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt_num(x).parse().unwrap_or(x)
    } else {
        x
    }
}

pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Long-format header for reports.
pub const REPORT_HEADER: [&str; 4] = ["claim", "field", "index", "value"];

/// Names for the abscissa, analytic and numeric series of a claim.
fn series_names(claim: &str) -> (&'static str, &'static str, &'static str) {
    match claim {
        "schwarzian" => ("x", "schwarzian_closed_form", "schwarzian_generic"),
        _ => ("abscissa", "analytic", "numeric"),
    }
}

/// One `claim, field, index, value` row per scalar of the report.
pub fn report_rows(r: &VerificationReport) -> Vec<Vec<String>> {
    let claim = r.claim.as_str();
    let mut rows = Vec::new();
    let mut push = |field: &str, index: Option<usize>, value: String| {
        rows.push(vec![
            claim.to_owned(),
            field.to_owned(),
            index.map_or_else(String::new, |i| i.to_string()),
            value,
        ]);
    };
    for (k, v) in &r.parameters {
        push(k, None, fmt_num(*v));
    }
    let (x_name, a_name, n_name) = series_names(claim);
    for (name, series) in [(x_name, &r.abscissae), (a_name, &r.analytic), (n_name, &r.numeric)] {
        for (i, v) in series.iter().enumerate() {
            push(name, Some(i), fmt_num(*v));
        }
    }
    push("abs_deviation", None, fmt_num(r.abs_deviation));
    push("rel_deviation", None, fmt_num(r.rel_deviation));
    push("tolerance", None, fmt_num(r.tolerance));
    for (k, v) in &r.metrics {
        push(k, None, fmt_num(*v));
    }
    for (k, v) in &r.conditions {
        push(k, None, v.to_string());
    }
    push("pass", None, r.pass.to_string());
    for (i, note) in r.notes.iter().enumerate() {
        push("note", Some(i), note.clone());
    }
    rows
}

/// JSON form of a report with numbers rounded like the CSV.
pub fn report_json(r: &VerificationReport) -> Result<serde_json::Value, CliError> {
    let mut v = serde_json::to_value(r)?;
    round_json(&mut v);
    if let serde_json::Value::Object(map) = &mut v {
        if r.claim == "schwarzian" {
            for (from, to) in [
                ("abscissae", "x"),
                ("analytic", "schwarzian_closed_form"),
                ("numeric", "schwarzian_generic"),
            ] {
                if let Some(series) = map.remove(from) {
                    map.insert(to.to_owned(), series);
                }
            }
        }
    }
    Ok(v)
}

fn round_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(x) = n.as_f64().filter(|_| n.is_f64()) {
                if let Some(r) = serde_json::Number::from_f64(round12(x)) {
                    *n = r;
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_json),
        serde_json::Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn write_reports(
    out: &mut dyn Write,
    reports: &[VerificationReport],
    format: crate::args::Format,
) -> Result<(), CliError> {
    match format {
        crate::args::Format::Csv => {
            let rows: Vec<_> = reports.iter().flat_map(report_rows).collect();
            write_csv(out, &REPORT_HEADER, &rows)
        }
        crate::args::Format::Json => {
            let docs = reports.iter().map(report_json).collect::<Result<Vec<_>, _>>()?;
            write_json(out, &docs)
        }
    }
}

/// One sample of an exported eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionRow {
    pub y: f64,
    /// Missing where the closed form over- or underflows.
    pub analytic: Option<f64>,
    pub numeric: f64,
}

pub const WAVEFUNCTION_HEADER: [&str; 3] = ["y", "analytic", "numeric"];

pub fn emit_wavefunction_csv(out: &mut dyn Write, rows: &[WavefunctionRow]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![fmt_num(r.y), r.analytic.map_or_else(String::new, fmt_num), fmt_num(r.numeric)])
        .collect();
    write_csv(out, &WAVEFUNCTION_HEADER, &rows)
}

pub fn parse_wavefunction_csv(input: impl Read) -> Result<Vec<WavefunctionRow>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(WAVEFUNCTION_HEADER) {
        return Err(CliError::Parameters(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| CliError::Parameters(format!("bad number {s:?}: {e}")))
    };
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(WavefunctionRow {
                y: num(&rec[0])?,
                analytic: if rec[1].is_empty() { None } else { Some(num(&rec[1])?) },
                numeric: num(&rec[2])?,
            })
        })
        .collect()
}
