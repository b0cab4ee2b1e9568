use serde::Serialize;

use crate::datasets::DeviceLca;
use crate::error::{Error, Result};
use crate::model::Ratio;

/// Capex (production, transport, end-of-life) versus opex (use) emissions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifecycleSplit {
    pub capex_g: f64,
    pub opex_g: f64,
    pub total_g: f64,
    /// Production over total.
    pub manufacturing_fraction: Ratio,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl LifecycleSplit {
    pub fn capex_share(&self) -> Ratio {
        Ratio::of(self.capex_g, self.total_g)
    }
}

pub fn lifecycle_split(lca: &DeviceLca) -> Result<LifecycleSplit> {
    if lca.phases.is_empty() {
        return Err(Error::EmptyLca(lca.name.clone()));
    }
    let warnings = lca
        .phases
        .named()
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(phase, _)| format!("{}: {phase} phase not reported, counted as 0 g", lca.name))
        .collect();
    let p = &lca.phases;
    let production = p.production_g.unwrap_or(0.0);
    let capex_g = production + p.transport_g.unwrap_or(0.0) + p.end_of_life_g.unwrap_or(0.0);
    let opex_g = p.use_g.unwrap_or(0.0);
    let total_g = capex_g + opex_g;
    Ok(LifecycleSplit {
        capex_g,
        opex_g,
        total_g,
        manufacturing_fraction: Ratio::of(production, total_g),
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendPoint {
    pub year: i32,
    pub name: String,
    pub manufacturing_fraction: Ratio,
    pub total_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub points: Vec<TrendPoint>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// Manufacturing fraction per device generation, ordered by year then name.
pub fn generation_trend(lcas: &[DeviceLca]) -> Result<Trend> {
    if lcas.is_empty() {
        return Err(Error::validation(
            "generation trend needs at least one record",
        ));
    }
    let mut ordered: Vec<&DeviceLca> = lcas.iter().collect();
    ordered.sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.name.cmp(&b.name)));

    let mut points = Vec::with_capacity(ordered.len());
    let mut warnings = Vec::new();
    for lca in ordered {
        let split = lifecycle_split(lca)?;
        warnings.extend(split.warnings);
        points.push(TrendPoint {
            year: lca.year,
            name: lca.name.clone(),
            manufacturing_fraction: split.manufacturing_fraction,
            total_g: split.total_g,
        });
    }
    Ok(Trend { points, warnings })
}
