//! Numeric tolerances used by the audit, in one place.
//!
//! Symbolic checks are exact and have no tolerance. The defaults can be
//! overridden by pointing `VISLAW_TOLERANCES` at a JSON file holding any
//! subset of the fields.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const ENV_VAR: &str = "VISLAW_TOLERANCES";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative residual of `(1 - eps d_x) P = v^2/2` along a run.
    pub spectral_constraint: f64,
    /// Auxiliary-field right-hand side against the nonlocal-flux form, relative.
    pub nonlocal_flux: f64,
    /// Relative mass drift.
    pub mass: f64,
    /// Spectral against finite-difference solution, absolute.
    pub cross_scheme: f64,
    /// Burgers solver against the Cole-Hopf solution, absolute.
    pub burgers_oracle: f64,
    pub pearcey_closed_form: f64,
    pub linear_ode: f64,
    pub nonlinear_ode: f64,
    /// Half-width of the accepted window around the amplitude exponent 1/4.
    pub amplitude_exponent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            spectral_constraint: 1e-9,
            nonlocal_flux: 1e-9,
            mass: 1e-8,
            cross_scheme: 1e-4,
            burgers_oracle: 1e-6,
            pearcey_closed_form: 1e-10,
            linear_ode: 1e-6,
            nonlinear_ode: 1e-5,
            amplitude_exponent: 0.05,
        }
    }
}

impl Tolerances {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("tolerance file {}: {e}", path.display())))
    }

    /// Defaults, or the file named by `VISLAW_TOLERANCES` when it is set.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}
