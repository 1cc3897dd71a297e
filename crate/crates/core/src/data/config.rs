//! Run configuration shared by every command.

use serde::{Deserialize, Serialize};

use crate::calibration::{CalibrationOptions, ModelChoice};
use crate::ema::EmaConfig;
use crate::error::{Error, Result};

use super::document;
use super::series::ShareUnit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma_cash: f64,
    pub sigma_cashless: f64,
    pub z: f64,
    #[serde(rename = "T_years")]
    pub period: f64,
    pub gamma_default: f64,
    pub share_unit: ShareUnit,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sigma_cash: 1.0,
            sigma_cashless: 10.0,
            z: 4.0,
            period: 50.0,
            gamma_default: 0.3,
            share_unit: ShareUnit::Fraction,
        }
    }
}

impl RunConfig {
    /// Parses and validates a configuration document; absent keys take defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = document::from_document(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        document::to_document(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.ema()?;
        if !(self.gamma_default > 0.0 && self.gamma_default < 1.0) {
            return Err(Error::Schema {
                path: "gamma_default".into(),
                message: format!("must lie strictly inside (0,1), got {}", self.gamma_default),
            });
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::Schema {
                path: "T_years".into(),
                message: format!("must be positive, got {}", self.period),
            });
        }
        Ok(())
    }

    pub fn ema(&self) -> Result<EmaConfig> {
        EmaConfig::new(self.sigma_cash, self.sigma_cashless, self.z)
    }

    pub fn calibration(&self, model: ModelChoice, gamma: Option<f64>) -> CalibrationOptions {
        CalibrationOptions {
            gamma: gamma.unwrap_or(self.gamma_default),
            period: self.period,
            z: self.z,
            model,
        }
    }
}
