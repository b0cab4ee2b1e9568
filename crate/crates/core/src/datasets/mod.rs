//! Reference data: carbon intensities, embodied-carbon coefficients and
//! device life-cycle records.
//!
//! Loaded tables are immutable. Every loader works on any [`Read`] source and
//! reports failures as [`Error::Load`] with the offending line or record.

use std::io::Read;

use crate::error::{Error, Result};

pub mod bundled;
mod coefficients;
mod intensity;
mod lca;

pub use coefficients::{load_coefficients, Coefficient, CoefficientSet, CoefficientUnit};
pub use intensity::{
    load_intensity_table, lookup_intensity, IntensityEntry, IntensityTable, TableKind,
};
pub use lca::{load_device_lca, to_json as device_lca_to_json, DeviceLca, LcaPhases, Performance};

/// Trimmed and case-folded. No other matching is applied.
pub fn normalize_label(label: &str) -> String {
    label.trim().to_lowercase()
}

fn read_all(mut source: impl Read) -> Result<String> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::load_at("input", e.to_string()))?;
    Ok(text)
}

/// Leading `#` comment lines, without the marker.
fn leading_comments(text: &str) -> String {
    text.lines()
        .take_while(|l| l.trim_start().starts_with('#'))
        .map(|l| l.trim_start().trim_start_matches('#').trim())
        .collect::<Vec<_>>()
        .join("\n")
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::load_at_line(pos.line(), e.to_string()),
        None => Error::load_at("input", e.to_string()),
    }
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, required: &[&str], optional: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let line = headers.position().map_or(1, |p| p.line());
    let got: Vec<&str> = headers.iter().collect();
    let ok = got.len() >= required.len()
        && got.len() <= required.len() + optional.len()
        && got
            .iter()
            .zip(required.iter().chain(optional))
            .all(|(g, want)| g == want);
    if !ok {
        let mut want = required.join(",");
        for o in optional {
            want.push_str(&format!("[,{o}]"));
        }
        return Err(Error::load_at_line(
            line,
            format!("expected header `{want}`, found `{}`", got.join(",")),
        ));
    }
    Ok(())
}

fn parse_number(field: &str, name: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::load_at_line(line, format!("{name} '{field}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::load_at_line(
            line,
            format!("{name} '{field}' is not finite"),
        ));
    }
    Ok(v)
}

fn write_provenance(out: &mut String, provenance: &str) {
    for line in provenance.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
}
