//! Manufacturing-footprint estimates from die area and memory/storage
//! capacity, and calibration of the per-mm² SoC coefficient against devices
//! with published footprints.
//!
//! The SoC coefficient is recovered by subtraction: the integrated-circuit
//! share of a device's manufacturing footprint, minus what its DRAM and
//! storage account for, divided by its die area.

use std::io::Read;

use serde::Serialize;

use crate::datasets::{CoefficientSet, CoefficientUnit};
use crate::error::{non_negative, Error, Result};
use crate::model::{ComponentKind, ComponentSpec, EmbodiedSource};

/// Integrated circuits' share of manufacturing carbon when no `ic_share`
/// coefficient is available.
pub const DEFAULT_IC_SHARE: f64 = 0.33;

/// Which coefficients stand in for the SoC, DRAM and storage. The process
/// nodes of phone memories are not published, so the caller picks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatorKeys {
    pub soc: String,
    pub dram: String,
    pub storage: String,
}

impl Default for EstimatorKeys {
    fn default() -> Self {
        EstimatorKeys {
            soc: "soc_2019".into(),
            dram: "dram_ddr3_50nm".into(),
            storage: "storage_mobile_avg".into(),
        }
    }
}

struct Rates {
    soc: f64,
    dram: f64,
    storage: f64,
}

impl Rates {
    fn resolve(coefficients: &CoefficientSet, keys: &EstimatorKeys) -> Result<Rates> {
        Ok(Rates {
            soc: coefficients
                .require(&keys.soc, CoefficientUnit::GramsPerMm2)?
                .value,
            dram: coefficients
                .require(&keys.dram, CoefficientUnit::GramsPerGb)?
                .value,
            storage: coefficients
                .require(&keys.storage, CoefficientUnit::GramsPerGb)?
                .value,
        })
    }

    fn memory_g(&self, dram_gb: f64, storage_gb: f64) -> f64 {
        dram_gb * self.dram + storage_gb * self.storage
    }
}

/// `ic_share` from the set, or [`DEFAULT_IC_SHARE`].
pub fn ic_share(coefficients: &CoefficientSet) -> f64 {
    coefficients
        .get("ic_share")
        .filter(|c| c.unit == CoefficientUnit::Fraction)
        .map_or(DEFAULT_IC_SHARE, |c| c.value)
}

/// Integrated-circuit footprint in grams.
pub fn estimate_ic_footprint(
    die_area_mm2: f64,
    dram_gb: f64,
    storage_gb: f64,
    coefficients: &CoefficientSet,
    keys: &EstimatorKeys,
) -> Result<f64> {
    non_negative("die_area_mm2", die_area_mm2)?;
    non_negative("dram_gb", dram_gb)?;
    non_negative("storage_gb", storage_gb)?;
    let rates = Rates::resolve(coefficients, keys)?;
    Ok(die_area_mm2 * rates.soc + rates.memory_g(dram_gb, storage_gb))
}

fn check_share(ic_share: f64) -> Result<()> {
    if ic_share.is_finite() && ic_share > 0.0 && ic_share <= 1.0 {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "ic_share must be within (0, 1], got {ic_share}"
        )))
    }
}

/// Scales an integrated-circuit footprint up to the whole device.
pub fn estimate_device_total(ic_footprint_g: f64, ic_share: f64) -> Result<f64> {
    non_negative("ic_footprint_g", ic_footprint_g)?;
    check_share(ic_share)?;
    Ok(ic_footprint_g / ic_share)
}

/// Replaces coefficient references with grams (capacity or die area times
/// the coefficient). Components already in grams pass through.
pub fn resolve_components(
    components: &[ComponentSpec],
    coefficients: &CoefficientSet,
) -> Result<Vec<ComponentSpec>> {
    components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.validate()?;
            let name = match &c.embodied {
                Some(EmbodiedSource::Coefficient(name)) => name,
                _ => return Ok(c.clone()),
            };
            let (unit, amount) = match c.kind {
                ComponentKind::Soc => (CoefficientUnit::GramsPerMm2, c.die_area_mm2),
                ComponentKind::Memory | ComponentKind::Storage => {
                    (CoefficientUnit::GramsPerGb, c.capacity_gb)
                }
            };
            let rate = coefficients.require(name, unit)?.value;
            let amount = amount.ok_or_else(|| {
                Error::UnresolvedEmbodied(format!(
                    "component {i} ({}) references '{name}' but has no {}",
                    c.kind,
                    if c.kind == ComponentKind::Soc {
                        "die area"
                    } else {
                        "capacity"
                    }
                ))
            })?;
            let mut resolved = c.clone();
            resolved.embodied = Some(EmbodiedSource::Grams(amount * rate));
            Ok(resolved)
        })
        .collect()
}

/// A device with a published manufacturing footprint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationDevice {
    pub name: String,
    pub total_manufacturing_g: f64,
    pub ic_share: f64,
    pub dram_gb: f64,
    pub storage_gb: f64,
    pub die_area_mm2: f64,
}

impl CalibrationDevice {
    fn validate(&self) -> Result<()> {
        let name = &self.name;
        if !(self.total_manufacturing_g.is_finite() && self.total_manufacturing_g > 0.0) {
            return Err(Error::validation(format!(
                "{name}: total manufacturing footprint must be > 0"
            )));
        }
        check_share(self.ic_share).map_err(|e| Error::validation(format!("{name}: {e}")))?;
        non_negative("dram_gb", self.dram_gb)?;
        non_negative("storage_gb", self.storage_gb)?;
        if !(self.die_area_mm2.is_finite() && self.die_area_mm2 > 0.0) {
            return Err(Error::validation(format!("{name}: die area must be > 0")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceCoefficient {
    pub name: String,
    pub g_per_mm2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub mean_g_per_mm2: f64,
    /// Population standard deviation over the device set.
    pub std_g_per_mm2: f64,
    pub per_device: Vec<DeviceCoefficient>,
}

pub fn calibrate_soc_coefficient(
    devices: &[CalibrationDevice],
    coefficients: &CoefficientSet,
    keys: &EstimatorKeys,
) -> Result<CalibrationResult> {
    if devices.is_empty() {
        return Err(Error::validation("calibration needs at least one device"));
    }
    let rates = Rates::resolve(coefficients, keys)?;

    let mut per_device = Vec::with_capacity(devices.len());
    for d in devices {
        d.validate()?;
        let residual =
            d.total_manufacturing_g * d.ic_share - rates.memory_g(d.dram_gb, d.storage_gb);
        if residual.is_nan() || residual <= 0.0 {
            return Err(Error::Calibration {
                device: d.name.clone(),
                residual,
            });
        }
        per_device.push(DeviceCoefficient {
            name: d.name.clone(),
            g_per_mm2: residual / d.die_area_mm2,
        });
    }

    // Sorted so the statistics do not depend on device order.
    let mut values: Vec<f64> = per_device.iter().map(|d| d.g_per_mm2).collect();
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    sq.sort_by(f64::total_cmp);
    let var = sq.iter().sum::<f64>() / n;
    Ok(CalibrationResult {
        mean_g_per_mm2: mean,
        std_g_per_mm2: var.sqrt(),
        per_device,
    })
}

/// Mean absolute relative error of predictions against reported values.
pub fn evaluate_estimator(predictions: &[f64], reported: &[f64]) -> Result<f64> {
    if predictions.len() != reported.len() {
        return Err(Error::validation(format!(
            "{} predictions for {} reported values",
            predictions.len(),
            reported.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::validation("no predictions to evaluate"));
    }
    let mut total = 0.0;
    for (i, (&pred, &rep)) in predictions.iter().zip(reported).enumerate() {
        if !(rep.is_finite() && rep > 0.0) {
            return Err(Error::validation(format!(
                "reported value {i} must be > 0, got {rep}"
            )));
        }
        if !pred.is_finite() {
            return Err(Error::validation(format!("prediction {i} is not finite")));
        }
        total += (pred - rep).abs() / rep;
    }
    Ok(total / predictions.len() as f64)
}

/// Parses `name,total_manufacturing_g,ic_share,dram_gb,storage_gb,die_area_mm2`.
pub fn load_calibration_devices(source: impl Read) -> Result<Vec<CalibrationDevice>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let expected = [
        "name",
        "total_manufacturing_g",
        "ic_share",
        "dram_gb",
        "storage_gb",
        "die_area_mm2",
    ];
    let headers = rdr
        .headers()
        .map_err(|e| Error::load_at("line 1", e.to_string()))?
        .clone();
    if headers.iter().ne(expected) {
        return Err(Error::load_at(
            "line 1",
            format!("expected header `{}`", expected.join(",")),
        ));
    }
    let mut devices = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::load_at("input", e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            record[i].parse::<f64>().map_err(|_| {
                Error::load_at(
                    format!("line {line}"),
                    format!("{} '{}' is not a number", expected[i], &record[i]),
                )
            })
        };
        let device = CalibrationDevice {
            name: record[0].to_owned(),
            total_manufacturing_g: num(1)?,
            ic_share: num(2)?,
            dram_gb: num(3)?,
            storage_gb: num(4)?,
            die_area_mm2: num(5)?,
        };
        device
            .validate()
            .map_err(|e| Error::load_at(format!("line {line}"), e.to_string()))?;
        devices.push(device);
    }
    Ok(devices)
}
