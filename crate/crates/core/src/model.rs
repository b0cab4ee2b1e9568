//! The analytical model: power draw, operational carbon, embodied carbon and
//! their combination into a single footprint.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{non_negative, Error, Result};
use crate::units::WATTS_PER_KW;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Soc,
    Memory,
    Storage,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Soc => "soc",
            ComponentKind::Memory => "memory",
            ComponentKind::Storage => "storage",
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the manufacturing footprint of a component comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbodiedSource {
    /// Already known, in grams CO2e.
    Grams(f64),
    /// Name of a coefficient to be resolved against a
    /// [`CoefficientSet`](crate::datasets::CoefficientSet).
    Coefficient(String),
}

/// One hardware resource of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub kind: ComponentKind,
    pub tdp_w: f64,
    pub utilization: f64,
    pub capacity_gb: Option<f64>,
    pub die_area_mm2: Option<f64>,
    pub embodied: Option<EmbodiedSource>,
}

impl ComponentSpec {
    pub fn new(kind: ComponentKind, tdp_w: f64, utilization: f64) -> Result<Self> {
        let spec = ComponentSpec {
            kind,
            tdp_w,
            utilization,
            capacity_gb: None,
            die_area_mm2: None,
            embodied: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_capacity_gb(mut self, gb: f64) -> Result<Self> {
        self.capacity_gb = Some(gb);
        self.validate()?;
        Ok(self)
    }

    pub fn with_die_area_mm2(mut self, mm2: f64) -> Result<Self> {
        self.die_area_mm2 = Some(mm2);
        self.validate()?;
        Ok(self)
    }

    pub fn with_embodied(mut self, source: EmbodiedSource) -> Result<Self> {
        self.embodied = Some(source);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("tdp_w", self.tdp_w)?;
        if !(0.0..=1.0).contains(&self.utilization) {
            return Err(Error::validation(format!(
                "utilization must be within [0, 1], got {}",
                self.utilization
            )));
        }
        match self.kind {
            ComponentKind::Soc if self.capacity_gb.is_some() => {
                return Err(Error::validation(
                    "soc components carry a die area, not a capacity",
                ));
            }
            ComponentKind::Memory | ComponentKind::Storage if self.die_area_mm2.is_some() => {
                return Err(Error::validation(format!(
                    "{} components carry a capacity, not a die area",
                    self.kind
                )));
            }
            _ => {}
        }
        if let Some(gb) = self.capacity_gb {
            non_negative("capacity_gb", gb)?;
        }
        if let Some(mm2) = self.die_area_mm2 {
            non_negative("die_area_mm2", mm2)?;
        }
        match &self.embodied {
            Some(EmbodiedSource::Grams(g)) => {
                non_negative("embodied_g", *g)?;
            }
            Some(EmbodiedSource::Coefficient(name)) if name.trim().is_empty() => {
                return Err(Error::validation("empty coefficient reference"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Dynamic draw of this component in watts.
    pub fn draw_w(&self) -> f64 {
        self.tdp_w * self.utilization
    }
}

/// Grams CO2e emitted per kWh generated by a source or supplied by a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarbonIntensity {
    pub grams_per_kwh: f64,
    pub label: String,
}

impl CarbonIntensity {
    pub fn new(grams_per_kwh: f64, label: impl Into<String>) -> Result<Self> {
        non_negative("carbon intensity", grams_per_kwh)?;
        Ok(CarbonIntensity {
            grams_per_kwh,
            label: label.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperationalConfig {
    /// Utilization effectiveness: PUE for datacenters, charging overhead
    /// for battery-powered devices.
    pub ue: f64,
    pub components: Vec<ComponentSpec>,
    pub duration_h: f64,
    pub intensity: CarbonIntensity,
}

impl OperationalConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.ue.is_finite() || self.ue < 1.0 {
            return Err(Error::validation(format!(
                "utilization effectiveness must be finite and >= 1, got {}",
                self.ue
            )));
        }
        if self.components.is_empty() {
            return Err(Error::NoComponents);
        }
        for c in &self.components {
            c.validate()?;
        }
        non_negative("duration_h", self.duration_h)?;
        non_negative("carbon intensity", self.intensity.grams_per_kwh)?;
        Ok(())
    }

    /// Operational carbon of this configuration over its duration, in grams.
    pub fn operational_carbon(&self) -> Result<f64> {
        let power = compute_power(self)?;
        operational_carbon(power, self.duration_h, &self.intensity)
    }
}

/// Sums after sorting so the result does not depend on input order.
fn order_free_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// Average power draw in kilowatts: `UE * sum(TDP * Util)`.
pub fn compute_power(config: &OperationalConfig) -> Result<f64> {
    config.validate()?;
    let draw_w = order_free_sum(
        config
            .components
            .iter()
            .map(ComponentSpec::draw_w)
            .collect(),
    );
    Ok(config.ue * draw_w / WATTS_PER_KW)
}

/// Operational carbon in grams: `intensity * duration * power`.
pub fn operational_carbon(
    power_kw: f64,
    duration_h: f64,
    intensity: &CarbonIntensity,
) -> Result<f64> {
    non_negative("power_kw", power_kw)?;
    non_negative("duration_h", duration_h)?;
    non_negative("carbon intensity", intensity.grams_per_kwh)?;
    Ok(intensity.grams_per_kwh * (duration_h * power_kw))
}

/// Embodied carbon in grams, the sum of each component's resolved footprint.
///
/// Components whose footprint is still a coefficient reference (or absent)
/// must first go through [`crate::estimator::resolve_components`].
pub fn embodied_carbon(components: &[ComponentSpec]) -> Result<f64> {
    let mut terms = Vec::with_capacity(components.len());
    for (i, c) in components.iter().enumerate() {
        c.validate()?;
        match &c.embodied {
            Some(EmbodiedSource::Grams(g)) => terms.push(*g),
            Some(EmbodiedSource::Coefficient(name)) => {
                return Err(Error::UnresolvedEmbodied(format!(
                    "component {i} ({}) references coefficient '{name}'",
                    c.kind
                )))
            }
            None => {
                return Err(Error::UnresolvedEmbodied(format!(
                    "component {i} ({}) has no embodied footprint",
                    c.kind
                )))
            }
        }
    }
    Ok(order_free_sum(terms))
}

/// A quotient that may have a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Defined(f64),
    Undefined,
}

impl Ratio {
    pub fn of(numerator: f64, denominator: f64) -> Ratio {
        if denominator == 0.0 {
            Ratio::Undefined
        } else {
            Ratio::Defined(numerator / denominator)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Defined(v) => Some(v),
            Ratio::Undefined => None,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Defined(v) => write!(f, "{v}"),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Defined(v) => serializer.serialize_f64(*v),
            Ratio::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FootprintReport {
    pub op_cf_g: f64,
    pub hw_cf_g: f64,
    pub total_g: f64,
    pub opex_share: Ratio,
    pub capex_share: Ratio,
    /// Operational over embodied carbon.
    pub opex_capex_ratio: Ratio,
}

pub fn total_footprint(op_cf_g: f64, hw_cf_g: f64) -> Result<FootprintReport> {
    non_negative("op_cf_g", op_cf_g)?;
    non_negative("hw_cf_g", hw_cf_g)?;
    let total_g = op_cf_g + hw_cf_g;
    let (opex_share, capex_share) = if total_g > 0.0 {
        let opex = op_cf_g / total_g;
        (Ratio::Defined(opex), Ratio::Defined(1.0 - opex))
    } else {
        (Ratio::Undefined, Ratio::Undefined)
    };
    Ok(FootprintReport {
        op_cf_g,
        hw_cf_g,
        total_g,
        opex_share,
        capex_share,
        opex_capex_ratio: Ratio::of(op_cf_g, hw_cf_g),
    })
}
