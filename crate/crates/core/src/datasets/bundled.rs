//! Reference files compiled into the crate.

use super::{
    load_coefficients, load_device_lca, load_intensity_table, CoefficientSet, DeviceLca,
    IntensityTable, TableKind,
};

pub const ENERGY_SOURCES_FILE: &str = "energy_sources.csv";
pub const ENERGY_REGIONS_FILE: &str = "energy_regions.csv";
pub const COEFFICIENTS_FILE: &str = "coefficients.csv";
pub const DEVICES_FILE: &str = "devices.json";

pub const ENERGY_SOURCES_CSV: &str = include_str!("../../data/energy_sources.csv");
pub const ENERGY_REGIONS_CSV: &str = include_str!("../../data/energy_regions.csv");
pub const COEFFICIENTS_CSV: &str = include_str!("../../data/coefficients.csv");
pub const DEVICES_JSON: &str = include_str!("../../data/devices.json");

/// Short region names accepted in addition to the table labels.
pub const REGION_ALIASES: &[(&str, &str)] = &[("us", "united states"), ("usa", "united states")];

/// Bundled contents of a reference file, by file name.
pub fn file(name: &str) -> Option<&'static str> {
    match name {
        ENERGY_SOURCES_FILE => Some(ENERGY_SOURCES_CSV),
        ENERGY_REGIONS_FILE => Some(ENERGY_REGIONS_CSV),
        COEFFICIENTS_FILE => Some(COEFFICIENTS_CSV),
        DEVICES_FILE => Some(DEVICES_JSON),
        _ => None,
    }
}

pub fn with_region_aliases(mut table: IntensityTable) -> IntensityTable {
    for (alias, target) in REGION_ALIASES {
        if table.get(target).is_some() && table.get(alias).is_none() {
            table = table
                .with_alias(alias, target)
                .expect("alias checked above");
        }
    }
    table
}

pub fn energy_sources() -> IntensityTable {
    load_intensity_table(ENERGY_SOURCES_CSV.as_bytes(), TableKind::BySource)
        .expect("bundled energy_sources.csv is valid")
}

pub fn energy_regions() -> IntensityTable {
    let table = load_intensity_table(ENERGY_REGIONS_CSV.as_bytes(), TableKind::ByRegion)
        .expect("bundled energy_regions.csv is valid");
    with_region_aliases(table)
}

pub fn coefficients() -> CoefficientSet {
    load_coefficients(COEFFICIENTS_CSV.as_bytes()).expect("bundled coefficients.csv is valid")
}

pub fn devices() -> Vec<DeviceLca> {
    load_device_lca(DEVICES_JSON.as_bytes()).expect("bundled devices.json is valid")
}
