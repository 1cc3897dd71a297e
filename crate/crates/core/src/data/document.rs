//! TOML documents for parameter sets, calibration reports and scenarios.
//!
//! Keys carry their units (`alpha_per_year`, `T_years`, ...). Floats are
//! written in shortest round-trip form, so `load(save(x)) == x` bit for bit.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::calibration::CalibrationReport;
use crate::error::{Error, Result};
use crate::policy::Scenario;
use crate::share::ShareCurveParams;

pub fn to_document<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Schema {
        path: String::new(),
        message: e.to_string(),
    })
}

/// Parses a document, reporting the key path of the first schema violation.
pub fn from_document<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::Schema {
        path: String::new(),
        message: e.message().to_owned(),
    })?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().message().to_owned(),
        }
    })
}

pub fn save_params(params: &ShareCurveParams) -> Result<String> {
    to_document(params)
}

pub fn load_params(text: &str) -> Result<ShareCurveParams> {
    let params: ShareCurveParams = from_document(text)?;
    params.validate()?;
    Ok(params)
}

pub fn save_report(report: &CalibrationReport) -> Result<String> {
    to_document(report)
}

/// Loads a calibration report.
///
/// Only finiteness of the recovered parameters is enforced: a report may
/// legitimately carry (and warn about) a `gamma` outside `(0, 1)`.
pub fn load_report(text: &str) -> Result<CalibrationReport> {
    let report: CalibrationReport = from_document(text)?;
    let p = &report.params;
    if [p.alpha, p.beta, p.gamma, p.period, p.delta_t0]
        .iter()
        .any(|v| !v.is_finite())
    {
        return Err(Error::Schema {
            path: "params".into(),
            message: "parameters must be finite".into(),
        });
    }
    Ok(report)
}

pub fn save_scenario(scenario: &Scenario) -> Result<String> {
    to_document(scenario)
}

pub fn load_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = from_document(text)?;
    scenario.validate().map_err(|e| match e {
        Error::Schema { path, message } => Error::Schema {
            path: format!("baseline.{path}"),
            message,
        },
        other => other,
    })?;
    Ok(scenario)
}
