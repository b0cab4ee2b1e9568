//! Exact conversion factors into the canonical units.

pub const GRAMS_PER_KG: f64 = 1_000.0;
pub const GRAMS_PER_TONNE: f64 = 1_000_000.0;
pub const WATTS_PER_KW: f64 = 1_000.0;
pub const HOURS_PER_DAY: f64 = 24.0;
pub const HOURS_PER_YEAR: f64 = 8_760.0;
pub const SECONDS_PER_HOUR: f64 = 3_600.0;

/// Three-year device lifetime, in hours.
pub const DEFAULT_LIFETIME_HOURS: f64 = 3.0 * HOURS_PER_YEAR;

/// Midpoint of the 1.1-1.5 PUE range of modern warehouse-scale datacenters.
pub const DEFAULT_DATACENTER_UE: f64 = 1.3;

/// Midpoint of the 1.1-1.2 battery-charging overhead of mobile phones.
pub const DEFAULT_MOBILE_UE: f64 = 1.15;

pub fn kg_to_g(kg: f64) -> f64 {
    kg * GRAMS_PER_KG
}

pub fn tonnes_to_g(t: f64) -> f64 {
    t * GRAMS_PER_TONNE
}

pub fn g_to_kg(g: f64) -> f64 {
    g / GRAMS_PER_KG
}

pub fn g_to_tonnes(g: f64) -> f64 {
    g / GRAMS_PER_TONNE
}

pub fn watts_to_kw(w: f64) -> f64 {
    w / WATTS_PER_KW
}

pub fn days_to_hours(days: f64) -> f64 {
    days * HOURS_PER_DAY
}

pub fn years_to_hours(years: f64) -> f64 {
    years * HOURS_PER_YEAR
}

pub fn hours_to_days(hours: f64) -> f64 {
    hours / HOURS_PER_DAY
}
