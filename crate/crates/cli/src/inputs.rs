//! Locating, loading and fingerprinting the files a command consumes.
//!
//! Reference files are read from the data directory (`--data-dir`, else
//! `CARBON_DATA_DIR`) or, when neither is set, from the copies compiled into
//! carbon-core. Every loaded input is fingerprinted with the SHA-256 of its
//! canonical re-serialization, so row order does not change the digest of
//! data whose order carries no meaning.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use carbon_core::analysis::{CapacityPoint, ParetoPoint, Scope, ScopeEntry};
use carbon_core::datasets::{
    bundled, device_lca_to_json, load_coefficients, load_device_lca, load_intensity_table,
    CoefficientSet, DeviceLca, IntensityTable, TableKind,
};
use carbon_core::estimator::{load_calibration_devices, CalibrationDevice};
use carbon_core::units;

use crate::report::Report;
use crate::CliError;

pub const DATA_DIR_ENV: &str = "CARBON_DATA_DIR";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone)]
pub struct DataDir(Option<PathBuf>);

impl DataDir {
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        DataDir(flag.or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)))
    }

    /// Contents and display name of a reference file.
    fn read(&self, file: &str) -> Result<(String, String), CliError> {
        match &self.0 {
            Some(dir) => {
                let path = dir.join(file);
                Ok((read_file(&path)?, path.display().to_string()))
            }
            None => {
                let text = bundled::file(file).expect("known bundled file");
                Ok((text.to_string(), format!("bundled:{file}")))
            }
        }
    }

    pub fn energy_regions(&self, report: &mut Report) -> Result<IntensityTable, CliError> {
        let (text, name) = self.read(bundled::ENERGY_REGIONS_FILE)?;
        let table = load_intensity_table(text.as_bytes(), TableKind::ByRegion)
            .map_err(|e| in_file(&name, e))?;
        report.add_input(name, sha256_hex(table.to_csv().as_bytes()));
        Ok(bundled::with_region_aliases(table))
    }

    pub fn energy_sources(&self, report: &mut Report) -> Result<IntensityTable, CliError> {
        let (text, name) = self.read(bundled::ENERGY_SOURCES_FILE)?;
        let table = load_intensity_table(text.as_bytes(), TableKind::BySource)
            .map_err(|e| in_file(&name, e))?;
        report.add_input(name, sha256_hex(table.to_csv().as_bytes()));
        Ok(table)
    }

    pub fn coefficients(&self, report: &mut Report) -> Result<CoefficientSet, CliError> {
        let (text, name) = self.read(bundled::COEFFICIENTS_FILE)?;
        coefficients_from(&text, name, report)
    }

    pub fn devices(&self, report: &mut Report) -> Result<Vec<DeviceLca>, CliError> {
        let (text, name) = self.read(bundled::DEVICES_FILE)?;
        devices_from(&text, name, report)
    }
}

fn in_file(name: &str, e: impl std::fmt::Display) -> CliError {
    CliError(format!("{name}: {e}"))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

fn coefficients_from(
    text: &str,
    name: String,
    report: &mut Report,
) -> Result<CoefficientSet, CliError> {
    let set = load_coefficients(text.as_bytes()).map_err(|e| in_file(&name, e))?;
    report.add_input(name, sha256_hex(set.to_csv().as_bytes()));
    Ok(set)
}

fn devices_from(text: &str, name: String, report: &mut Report) -> Result<Vec<DeviceLca>, CliError> {
    let devices = load_device_lca(text.as_bytes()).map_err(|e| in_file(&name, e))?;
    let mut canonical = devices.clone();
    canonical.sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.name.cmp(&b.name)));
    report.add_input(name, sha256_hex(device_lca_to_json(&canonical).as_bytes()));
    Ok(devices)
}

pub fn coefficients_file(path: &Path, report: &mut Report) -> Result<CoefficientSet, CliError> {
    coefficients_from(&read_file(path)?, path.display().to_string(), report)
}

pub fn devices_file(path: &Path, report: &mut Report) -> Result<Vec<DeviceLca>, CliError> {
    devices_from(&read_file(path)?, path.display().to_string(), report)
}

/// Deserializes CSV rows (with `#` comments) and records the digest of the
/// rows re-serialized in sorted order.
fn csv_rows<T: DeserializeOwned>(path: &Path, report: &mut Report) -> Result<Vec<T>, CliError> {
    let name = path.display().to_string();
    let text = read_file(path)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| in_file(&name, e))?.clone();
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| in_file(&name, e))?;
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| in_file(&name, e))?;
        lines.push(record.iter().collect::<Vec<_>>().join(","));
        rows.push(row);
    }
    lines.sort();
    let canonical = format!(
        "{}\n{}",
        headers.iter().collect::<Vec<_>>().join(","),
        lines.join("\n")
    );
    report.add_input(name, sha256_hex(canonical.as_bytes()));
    Ok(rows)
}

#[derive(Deserialize)]
struct PointRow {
    label: String,
    merit: f64,
    carbon_g: f64,
}

pub fn pareto_points(path: &Path, report: &mut Report) -> Result<Vec<ParetoPoint>, CliError> {
    let rows: Vec<PointRow> = csv_rows(path, report)?;
    Ok(rows
        .into_iter()
        .map(|r| ParetoPoint::new(r.label, r.merit, r.carbon_g))
        .collect())
}

#[derive(Deserialize)]
struct CapacityRow {
    label: String,
    capacity_gb: f64,
    g_per_gb: f64,
}

pub fn capacity_points(path: &Path, report: &mut Report) -> Result<Vec<CapacityPoint>, CliError> {
    let rows: Vec<CapacityRow> = csv_rows(path, report)?;
    Ok(rows
        .into_iter()
        .map(|r| CapacityPoint {
            label: r.label,
            capacity_gb: r.capacity_gb,
            g_per_gb: r.g_per_gb,
        })
        .collect())
}

#[derive(Deserialize)]
struct ScopeRow {
    org: String,
    year: i32,
    scope: String,
    value: f64,
    unit: String,
}

/// Rows of `org,year,scope,value,unit` with unit one of `g`, `kg`, `t`.
pub fn scope_entries(path: &Path, report: &mut Report) -> Result<Vec<ScopeEntry>, CliError> {
    let rows: Vec<ScopeRow> = csv_rows(path, report)?;
    rows.into_iter()
        .map(|r| {
            let scope: Scope = r.scope.parse().map_err(CliError)?;
            let grams = match r.unit.as_str() {
                "g" => r.value,
                "kg" => units::kg_to_g(r.value),
                "t" => units::tonnes_to_g(r.value),
                other => {
                    return Err(CliError(format!(
                        "unknown unit '{other}' (expected g, kg or t)"
                    )))
                }
            };
            Ok(ScopeEntry {
                scope,
                grams,
                year: r.year,
                org: r.org,
            })
        })
        .collect()
}

pub fn calibration_devices(
    path: &Path,
    report: &mut Report,
) -> Result<Vec<CalibrationDevice>, CliError> {
    let name = path.display().to_string();
    let devices =
        load_calibration_devices(read_file(path)?.as_bytes()).map_err(|e| in_file(&name, e))?;
    let mut lines: Vec<String> = devices
        .iter()
        .map(|d| {
            format!(
                "{},{},{},{},{},{}",
                d.name,
                d.total_manufacturing_g,
                d.ic_share,
                d.dram_gb,
                d.storage_gb,
                d.die_area_mm2
            )
        })
        .collect();
    lines.sort();
    report.add_input(name, sha256_hex(lines.join("\n").as_bytes()));
    Ok(devices)
}
