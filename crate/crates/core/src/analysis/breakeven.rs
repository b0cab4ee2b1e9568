use serde::{Serialize, Serializer};

use crate::error::{non_negative, Result};
use crate::model::CarbonIntensity;
use crate::units::SECONDS_PER_HOUR;

/// Operating time after which operational carbon matches embodied carbon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Breakeven {
    Hours(f64),
    /// Zero power or a zero-carbon supply: operational carbon never catches up.
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakevenUnits {
    Units(f64),
    Never,
}

impl Breakeven {
    pub fn hours(self) -> Option<f64> {
        match self {
            Breakeven::Hours(h) => Some(h),
            Breakeven::Never => None,
        }
    }
}

impl BreakevenUnits {
    pub fn units(self) -> Option<f64> {
        match self {
            BreakevenUnits::Units(u) => Some(u),
            BreakevenUnits::Never => None,
        }
    }
}

impl Serialize for Breakeven {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Breakeven::Hours(h) => s.serialize_f64(*h),
            Breakeven::Never => s.serialize_str("never"),
        }
    }
}

impl Serialize for BreakevenUnits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BreakevenUnits::Units(u) => s.serialize_f64(*u),
            BreakevenUnits::Never => s.serialize_str("never"),
        }
    }
}

/// `embodied / (intensity * power)`. Zero embodied carbon is amortized from
/// the start, even on a zero-carbon supply.
pub fn breakeven_duration(
    embodied_g: f64,
    power_kw: f64,
    intensity: &CarbonIntensity,
) -> Result<Breakeven> {
    non_negative("embodied_g", embodied_g)?;
    non_negative("power_kw", power_kw)?;
    non_negative("carbon intensity", intensity.grams_per_kwh)?;
    if embodied_g == 0.0 {
        return Ok(Breakeven::Hours(0.0));
    }
    let rate_g_per_h = intensity.grams_per_kwh * power_kw;
    if rate_g_per_h == 0.0 {
        return Ok(Breakeven::Never);
    }
    let hours = embodied_g / rate_g_per_h;
    if hours.is_finite() {
        Ok(Breakeven::Hours(hours))
    } else {
        Ok(Breakeven::Never)
    }
}

/// Work completed (e.g. inference images) before the break-even point.
pub fn breakeven_units(breakeven: Breakeven, throughput_per_s: f64) -> Result<BreakevenUnits> {
    non_negative("throughput", throughput_per_s)?;
    Ok(match breakeven {
        Breakeven::Hours(h) => BreakevenUnits::Units(h * SECONDS_PER_HOUR * throughput_per_s),
        Breakeven::Never => BreakevenUnits::Never,
    })
}
