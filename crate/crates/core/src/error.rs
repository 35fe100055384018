use thiserror::Error;

use crate::types::{DimensionlessPoint, ModelKind};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field} = {value}: {reason}")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{operation} is not available for the {model} model")]
    UnsupportedModel {
        operation: &'static str,
        model: ModelKind,
    },

    /// The boundary-matching system could not be solved reliably.
    #[error("matching system is numerically singular at {point} (condition {condition:.3e}, residual {residual:.3e})")]
    Numeric {
        point: DimensionlessPoint,
        condition: f64,
        residual: f64,
    },
}

pub(crate) fn check_coupling(field: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() {
        return Err(Error::Domain {
            field,
            value,
            reason: "must not be NaN",
        });
    }
    if !value.is_finite() {
        return Err(Error::Domain {
            field,
            value,
            reason: "must be finite",
        });
    }
    if value < 0.0 {
        return Err(Error::Domain {
            field,
            value,
            reason: "must be non-negative",
        });
    }
    Ok(value)
}
