//! Numeric tolerances, in one record.
//!
//! `RECTSURF_TOLERANCES` may point to a JSON file overriding any subset of
//! the fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "RECTSURF_TOLERANCES";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Truncation target for the tile series.
    pub series_term: f64,
    pub center_value: f64,
    pub complementarity: f64,
    pub fd_oracle: f64,
    pub fd_residual: f64,
    pub harmonicity: f64,
    pub zeta_involution: f64,
    pub unit_norm: f64,
    pub tangency_angle: f64,
    pub lie_residual: f64,
    pub boundary_parallel: f64,
    pub center_slope: f64,
    /// Slope bound near horizontal sides.
    pub side_slope: f64,
    pub pole_clearance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series_term: 1e-15,
            center_value: 1e-9,
            complementarity: 1e-9,
            fd_oracle: 1e-4,
            fd_residual: 1e-10,
            harmonicity: 1e-8,
            zeta_involution: 1e-12,
            unit_norm: 1e-12,
            tangency_angle: 1e-2,
            lie_residual: 1e-3,
            boundary_parallel: 1e-6,
            center_slope: 1e-6,
            side_slope: 0.05,
            pole_clearance: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("tolerance file: {e}")))
    }

    /// Defaults, overridden by the file named in `RECTSURF_TOLERANCES` if set.
    pub fn load() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(path) if !path.is_empty() => Self::from_json(&std::fs::read_to_string(&path)?),
            _ => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override() {
        let t = Tolerances::from_json(r#"{"fd_oracle": 0.5}"#).unwrap();
        assert_eq!(t.fd_oracle, 0.5);
        assert_eq!(t.unit_norm, 1e-12);
        assert!(Tolerances::from_json(r#"{"nope": 1}"#).is_err());
    }
}
