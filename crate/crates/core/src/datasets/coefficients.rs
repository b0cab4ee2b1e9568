use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::{
    check_header, csv_error, csv_reader, leading_comments, normalize_label, parse_number, read_all,
    write_provenance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientUnit {
    GramsPerGb,
    GramsPerMm2,
    Fraction,
}

impl CoefficientUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientUnit::GramsPerGb => "g_per_GB",
            CoefficientUnit::GramsPerMm2 => "g_per_mm2",
            CoefficientUnit::Fraction => "fraction",
        }
    }
}

impl fmt::Display for CoefficientUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoefficientUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "g_per_GB" => Ok(CoefficientUnit::GramsPerGb),
            "g_per_mm2" => Ok(CoefficientUnit::GramsPerMm2),
            "fraction" => Ok(CoefficientUnit::Fraction),
            other => Err(format!("unknown unit tag '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
    pub unit: CoefficientUnit,
    /// One standard deviation, in the same unit. Reported, never propagated.
    pub spread: Option<f64>,
    pub technology: String,
}

/// Embodied-carbon coefficients keyed by name. Per-GB footprints differ by
/// technology node, so there is no single memory or storage coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientSet {
    pub provenance: String,
    entries: BTreeMap<String, Coefficient>,
}

impl CoefficientSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Coefficient> {
        self.entries.values()
    }

    pub fn get(&self, name: &str) -> Option<&Coefficient> {
        self.entries.get(&normalize_label(name))
    }

    /// Looks up a coefficient and checks its unit.
    pub fn require(&self, name: &str, unit: CoefficientUnit) -> Result<&Coefficient> {
        let c = self
            .get(name)
            .ok_or_else(|| Error::UnresolvedEmbodied(format!("no coefficient named '{name}'")))?;
        if c.unit != unit {
            return Err(Error::UnresolvedEmbodied(format!(
                "coefficient '{name}' is in {}, expected {unit}",
                c.unit
            )));
        }
        Ok(c)
    }

    pub fn insert(&mut self, coefficient: Coefficient) -> Result<()> {
        validate(&coefficient)?;
        let key = normalize_label(&coefficient.name);
        if self.entries.contains_key(&key) {
            return Err(Error::validation(format!(
                "duplicate coefficient '{}'",
                coefficient.name
            )));
        }
        self.entries.insert(key, coefficient);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        write_provenance(&mut out, &self.provenance);
        let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
        wtr.write_record(["name", "value", "unit", "spread", "technology"])
            .expect("in-memory csv write");
        for c in self.entries.values() {
            let spread = c.spread.map(|s| s.to_string()).unwrap_or_default();
            wtr.write_record([
                c.name.as_str(),
                &c.value.to_string(),
                c.unit.as_str(),
                &spread,
                &c.technology,
            ])
            .expect("in-memory csv write");
        }
        out.push_str(&String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

fn validate(c: &Coefficient) -> Result<()> {
    if c.name.trim().is_empty() {
        return Err(Error::validation("empty coefficient name"));
    }
    if !(c.value.is_finite() && c.value > 0.0) {
        return Err(Error::validation(format!(
            "coefficient '{}' must be > 0, got {}",
            c.name, c.value
        )));
    }
    if c.unit == CoefficientUnit::Fraction && c.value > 1.0 {
        return Err(Error::validation(format!(
            "fraction '{}' exceeds 1: {}",
            c.name, c.value
        )));
    }
    if let Some(s) = c.spread {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::validation(format!(
                "spread of '{}' must be >= 0, got {s}",
                c.name
            )));
        }
    }
    Ok(())
}

/// Parses a `name,value,unit,spread,technology` CSV.
pub fn load_coefficients(source: impl Read) -> Result<CoefficientSet> {
    let text = read_all(source)?;
    let mut rdr = csv_reader(&text);
    check_header(
        &mut rdr,
        &["name", "value", "unit", "spread", "technology"],
        &[],
    )?;

    let mut set = CoefficientSet {
        provenance: leading_comments(&text),
        entries: BTreeMap::new(),
    };
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 5 {
            return Err(Error::load_at_line(
                line,
                format!("expected 5 fields, found {}", record.len()),
            ));
        }
        let value = parse_number(&record[1], "value", line)?;
        let unit = record[2]
            .parse()
            .map_err(|e: String| Error::load_at_line(line, e))?;
        let spread = match &record[3] {
            "" => None,
            s => Some(parse_number(s, "spread", line)?),
        };
        let coefficient = Coefficient {
            name: record[0].to_owned(),
            value,
            unit,
            spread,
            technology: record[4].to_owned(),
        };
        set.insert(coefficient).map_err(|e| match e {
            Error::Validation(msg) => Error::load_at_line(line, msg),
            other => other,
        })?;
    }
    Ok(set)
}
