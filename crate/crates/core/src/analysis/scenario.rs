use serde::Serialize;

use crate::error::{non_negative, Error, Result};

/// Emissions split into the part attributable to electricity and the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioBreakdown {
    pub energy_attributed_g: f64,
    pub other_g: f64,
}

impl ScenarioBreakdown {
    pub fn new(energy_attributed_g: f64, other_g: f64) -> Result<Self> {
        non_negative("energy_attributed_g", energy_attributed_g)?;
        non_negative("other_g", other_g)?;
        Ok(ScenarioBreakdown {
            energy_attributed_g,
            other_g,
        })
    }

    /// A unit-total breakdown with the given electricity share.
    pub fn from_share(share: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&share) {
            return Err(Error::validation(format!(
                "energy share must be within [0, 1], got {share}"
            )));
        }
        Self::new(share, 1.0 - share)
    }

    pub fn total_g(&self) -> f64 {
        self.energy_attributed_g + self.other_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub breakdown: ScenarioBreakdown,
    /// Old total over new total.
    pub reduction_factor: f64,
}

/// Divides the electricity-attributed emissions by `k` (a cleaner supply)
/// and reports the overall reduction `1 / (1 - s + s/k)`.
pub fn scenario_rescale(breakdown: &ScenarioBreakdown, k: f64) -> Result<ScenarioOutcome> {
    let breakdown = ScenarioBreakdown::new(breakdown.energy_attributed_g, breakdown.other_g)?;
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::validation(format!(
            "intensity reduction must be finite and > 0, got {k}"
        )));
    }
    if k < 1.0 {
        return Err(Error::validation(format!(
            "intensity reduction must be >= 1, got {k}; model a dirtier grid with a different intensity"
        )));
    }
    let rescaled = ScenarioBreakdown {
        energy_attributed_g: breakdown.energy_attributed_g / k,
        other_g: breakdown.other_g,
    };
    let total = breakdown.total_g();
    let reduction_factor = if total == 0.0 {
        1.0
    } else {
        let share = breakdown.energy_attributed_g / total;
        1.0 / (1.0 - share + share / k)
    };
    Ok(ScenarioOutcome {
        breakdown: rescaled,
        reduction_factor,
    })
}
