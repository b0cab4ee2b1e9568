//! First-order carbon-footprint model for computer hardware.
//!
//! The footprint of a system is split into an operational part (energy drawn
//! while the hardware runs, weighted by the carbon intensity of the grid that
//! supplies it) and an embodied part (manufacturing, transport and disposal of
//! the hardware itself):
//!
//! ```text
//! Power  = UE * sum_r(TDP_r * Util_r)
//! OP_CF  = intensity * (T * Power)
//! HW_CF  = sum_r(HW_r)
//! CF     = OP_CF + HW_CF
//! ```
//!
//! All quantities are carried in canonical units: grams CO2e, watts,
//! kilowatts, kilowatt-hours and hours. Conversions from kilograms, tonnes,
//! days or years live in [`units`] and belong at I/O boundaries only.

pub mod analysis;
pub mod datasets;
pub mod error;
pub mod estimator;
pub mod model;
pub mod units;

pub use error::{Error, Result};
pub use model::{
    compute_power, embodied_carbon, operational_carbon, total_footprint, CarbonIntensity,
    ComponentKind, ComponentSpec, EmbodiedSource, FootprintReport, OperationalConfig, Ratio,
};
