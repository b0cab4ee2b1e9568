use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ComponentKind, ComponentSpec, EmbodiedSource};

/// Per-phase emissions in grams. `None` means the phase was not reported,
/// which is distinct from a reported zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcaPhases {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub production_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_of_life_g: Option<f64>,
}

impl LcaPhases {
    pub fn named(&self) -> [(&'static str, Option<f64>); 4] {
        [
            ("production", self.production_g),
            ("transport", self.transport_g),
            ("use", self.use_g),
            ("end_of_life", self.end_of_life_g),
        ]
    }

    pub fn is_empty(&self) -> bool {
        self.named().iter().all(|(_, v)| v.is_none())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Performance {
    pub metric: String,
    pub units_per_s: f64,
}

/// Life-cycle record of one device.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceLca {
    pub name: String,
    pub year: i32,
    pub lifetime_hours: f64,
    pub phases: LcaPhases,
    pub hardware: Vec<ComponentSpec>,
    pub performance: Option<Performance>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDevice {
    name: String,
    year: i32,
    lifetime_hours: f64,
    #[serde(default)]
    phases: LcaPhases,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hardware: Vec<RawComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    performance: Option<Performance>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    kind: ComponentKind,
    #[serde(default)]
    tdp_w: f64,
    #[serde(default)]
    utilization: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity_gb: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    die_area_mm2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    embodied_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficient: Option<String>,
}

impl RawComponent {
    fn into_spec(self) -> std::result::Result<ComponentSpec, String> {
        let embodied = match (self.embodied_g, self.coefficient) {
            (Some(_), Some(_)) => {
                return Err("set either embodied_g or coefficient, not both".into())
            }
            (Some(g), None) => Some(EmbodiedSource::Grams(g)),
            (None, Some(name)) => Some(EmbodiedSource::Coefficient(name)),
            (None, None) => None,
        };
        let spec = ComponentSpec {
            kind: self.kind,
            tdp_w: self.tdp_w,
            utilization: self.utilization,
            capacity_gb: self.capacity_gb,
            die_area_mm2: self.die_area_mm2,
            embodied,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    fn from_spec(spec: &ComponentSpec) -> Self {
        let (embodied_g, coefficient) = match &spec.embodied {
            Some(EmbodiedSource::Grams(g)) => (Some(*g), None),
            Some(EmbodiedSource::Coefficient(c)) => (None, Some(c.clone())),
            None => (None, None),
        };
        RawComponent {
            kind: spec.kind,
            tdp_w: spec.tdp_w,
            utilization: spec.utilization,
            capacity_gb: spec.capacity_gb,
            die_area_mm2: spec.die_area_mm2,
            embodied_g,
            coefficient,
        }
    }
}

impl TryFrom<RawDevice> for DeviceLca {
    type Error = String;

    fn try_from(raw: RawDevice) -> std::result::Result<Self, String> {
        if raw.name.trim().is_empty() {
            return Err("empty device name".into());
        }
        if !(raw.lifetime_hours.is_finite() && raw.lifetime_hours > 0.0) {
            return Err(format!(
                "lifetime_hours must be > 0, got {}",
                raw.lifetime_hours
            ));
        }
        for (phase, value) in raw.phases.named() {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(format!("{phase} emissions must be >= 0, got {v}"));
                }
            }
        }
        if let Some(p) = &raw.performance {
            if !(p.units_per_s.is_finite() && p.units_per_s >= 0.0) {
                return Err(format!("performance must be >= 0, got {}", p.units_per_s));
            }
        }
        let hardware = raw
            .hardware
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.into_spec().map_err(|e| format!("hardware[{i}]: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(DeviceLca {
            name: raw.name,
            year: raw.year,
            lifetime_hours: raw.lifetime_hours,
            phases: raw.phases,
            hardware,
            performance: raw.performance,
        })
    }
}

impl DeviceLca {
    /// A record with only phase values, for ad-hoc analyses.
    pub fn from_phases(name: impl Into<String>, year: i32, phases: LcaPhases) -> Self {
        DeviceLca {
            name: name.into(),
            year,
            lifetime_hours: crate::units::DEFAULT_LIFETIME_HOURS,
            phases,
            hardware: Vec::new(),
            performance: None,
        }
    }
}

/// Parses a JSON array of device records. Unknown keys are rejected.
pub fn load_device_lca(source: impl Read) -> Result<Vec<DeviceLca>> {
    let raw: Vec<RawDevice> = serde_json::from_reader(source)
        .map_err(|e| Error::load_at(format!("line {}", e.line()), e.to_string()))?;
    raw.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let name = r.name.clone();
            DeviceLca::try_from(r)
                .map_err(|msg| Error::load_at(format!("record {i} ('{name}')"), msg))
        })
        .collect()
}

/// Serializes records back into the JSON schema.
pub fn to_json(records: &[DeviceLca]) -> String {
    let raw: Vec<RawDevice> = records
        .iter()
        .map(|d| RawDevice {
            name: d.name.clone(),
            year: d.year,
            lifetime_hours: d.lifetime_hours,
            phases: d.phases,
            hardware: d.hardware.iter().map(RawComponent::from_spec).collect(),
            performance: d.performance.clone(),
        })
        .collect();
    serde_json::to_string_pretty(&raw).expect("device records serialize")
}
