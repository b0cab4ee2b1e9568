use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("no components to evaluate")]
    NoComponents,

    #[error("unresolved embodied source: {0}")]
    UnresolvedEmbodied(String),

    #[error("load error at {location}: {message}")]
    Load { location: String, message: String },

    #[error("unknown region/source '{label}' (available: {})", available.join(", "))]
    UnknownLabel {
        label: String,
        available: Vec<String>,
    },

    #[error("empty LCA for '{0}': no phase emissions present")]
    EmptyLca(String),

    #[error("calibration failed for device '{device}': non-positive SoC residual {residual} g")]
    Calibration { device: String, residual: f64 },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn load_at_line(line: u64, msg: impl Into<String>) -> Self {
        Error::Load {
            location: format!("line {line}"),
            message: msg.into(),
        }
    }

    pub(crate) fn load_at(location: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Load {
            location: location.into(),
            message: msg.into(),
        }
    }
}

/// Rejects NaN, infinities and negative values.
pub(crate) fn non_negative(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::validation(format!(
            "{name} must be finite, got {value}"
        )));
    }
    if value < 0.0 {
        return Err(Error::validation(format!(
            "{name} must be >= 0, got {value}"
        )));
    }
    Ok(value)
}
