use std::collections::BTreeMap;
use std::io::Read;

use crate::error::{Error, Result};
use crate::model::CarbonIntensity;

use super::{
    check_header, csv_error, csv_reader, leading_comments, normalize_label, parse_number, read_all,
    write_provenance,
};

/// Whether a table is keyed by generation source (coal, wind, ...) or by
/// geographic grid (India, Iceland, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    BySource,
    ByRegion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensityEntry {
    pub intensity: CarbonIntensity,
    pub dominant_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTable {
    pub kind: TableKind,
    pub provenance: String,
    entries: BTreeMap<String, IntensityEntry>,
    aliases: BTreeMap<String, String>,
}

impl IntensityTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Normalized labels, sorted.
    pub fn labels(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &IntensityEntry> {
        self.entries.values()
    }

    /// Registers an explicit alternative spelling for an existing entry.
    pub fn with_alias(mut self, alias: &str, target: &str) -> Result<Self> {
        let alias = normalize_label(alias);
        let target = normalize_label(target);
        if !self.entries.contains_key(&target) {
            return Err(Error::validation(format!(
                "alias target '{target}' is not in the table"
            )));
        }
        if self.entries.contains_key(&alias) {
            return Err(Error::validation(format!(
                "alias '{alias}' shadows an existing label"
            )));
        }
        self.aliases.insert(alias, target);
        Ok(self)
    }

    pub fn get(&self, label: &str) -> Option<&IntensityEntry> {
        let key = normalize_label(label);
        self.entries
            .get(&key)
            .or_else(|| self.aliases.get(&key).and_then(|t| self.entries.get(t)))
    }

    /// Serializes back into the CSV schema, rows sorted by normalized label.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        write_provenance(&mut out, &self.provenance);
        let with_source = self.entries.values().any(|e| e.dominant_source.is_some());
        let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
        if with_source {
            wtr.write_record(["label", "g_per_kwh", "dominant_source"])
        } else {
            wtr.write_record(["label", "g_per_kwh"])
        }
        .expect("in-memory csv write");
        for e in self.entries.values() {
            let g = e.intensity.grams_per_kwh.to_string();
            let mut rec = vec![e.intensity.label.as_str(), g.as_str()];
            if with_source {
                rec.push(e.dominant_source.as_deref().unwrap_or(""));
            }
            wtr.write_record(&rec).expect("in-memory csv write");
        }
        out.push_str(&String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

/// Parses a `label,g_per_kwh[,dominant_source]` CSV.
pub fn load_intensity_table(source: impl Read, kind: TableKind) -> Result<IntensityTable> {
    let text = read_all(source)?;
    let mut rdr = csv_reader(&text);
    check_header(&mut rdr, &["label", "g_per_kwh"], &["dominant_source"])?;

    let mut entries = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() < 2 || record.len() > 3 {
            return Err(Error::load_at_line(
                line,
                format!("expected 2 or 3 fields, found {}", record.len()),
            ));
        }
        let label = &record[0];
        if label.is_empty() {
            return Err(Error::load_at_line(line, "empty label"));
        }
        let grams = parse_number(&record[1], "intensity", line)?;
        if grams < 0.0 {
            return Err(Error::load_at_line(
                line,
                format!("negative intensity {grams} for '{label}'"),
            ));
        }
        let dominant_source = record.get(2).filter(|s| !s.is_empty()).map(str::to_owned);
        let key = normalize_label(label);
        let entry = IntensityEntry {
            intensity: CarbonIntensity {
                grams_per_kwh: grams,
                label: label.to_owned(),
            },
            dominant_source,
        };
        if entries.insert(key, entry).is_some() {
            return Err(Error::load_at_line(
                line,
                format!("duplicate label '{label}'"),
            ));
        }
    }

    Ok(IntensityTable {
        kind,
        provenance: leading_comments(&text),
        entries,
        aliases: BTreeMap::new(),
    })
}

pub fn lookup_intensity(table: &IntensityTable, label: &str) -> Result<CarbonIntensity> {
    table
        .get(label)
        .map(|e| e.intensity.clone())
        .ok_or_else(|| Error::UnknownLabel {
            label: label.to_owned(),
            available: table.labels(),
        })
}
