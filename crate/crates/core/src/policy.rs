//! Policy interventions as arctan ramps on the trial-function growth
//! parameter, and scenario projections of share and CTI.
//!
//! Each event adds `eps (1 + (2/pi) atan((t - t_i) / omega))` to `alpha`;
//! the modified `alpha'(t)` is substituted directly into the trial function.

use std::f64::consts::FRAC_2_PI;

use serde::{Deserialize, Serialize};

use crate::ema::{self, EmaConfig, Region};
use crate::error::{Error, Result};
use crate::share::{self, ShareCurveParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvent {
    /// Impact on `alpha`, per year.
    #[serde(rename = "epsilon_per_year")]
    pub epsilon: f64,
    /// Start of the intervention, in trial-function years.
    #[serde(rename = "t_i_years")]
    pub t_i: f64,
    /// Ramp width; smaller means a faster effect.
    #[serde(rename = "omega_years")]
    pub omega: f64,
}

impl PolicyEvent {
    pub fn new(epsilon: f64, t_i: f64, omega: f64) -> Result<Self> {
        let ev = PolicyEvent {
            epsilon,
            t_i,
            omega,
        };
        ev.validate()?;
        Ok(ev)
    }

    /// Only accelerating policies (`epsilon >= 0`) with `omega > 0` are modelled.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.t_i.is_finite() && self.omega.is_finite()) {
            return Err(Error::domain("policy event parameters must be finite"));
        }
        if self.epsilon < 0.0 {
            return Err(Error::domain(format!(
                "negative policy impact epsilon = {} is not supported",
                self.epsilon
            )));
        }
        if self.omega <= 0.0 {
            return Err(Error::domain(format!(
                "policy ramp width omega must be positive, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Contribution of this event to `alpha'` at time `t`.
    pub fn increment(&self, t: f64) -> f64 {
        self.epsilon * (1.0 + FRAC_2_PI * ((t - self.t_i) / self.omega).atan())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: String,
    pub baseline: ShareCurveParams,
    #[serde(default)]
    pub events: Vec<PolicyEvent>,
}

impl Scenario {
    /// Validates the events and sorts them by start time.
    pub fn new(
        label: impl Into<String>,
        baseline: ShareCurveParams,
        mut events: Vec<PolicyEvent>,
    ) -> Result<Self> {
        for ev in &events {
            ev.validate()?;
        }
        events.sort_by(|a, b| a.t_i.total_cmp(&b.t_i));
        Ok(Scenario {
            label: label.into(),
            baseline,
            events,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.baseline.validate()?;
        for ev in &self.events {
            ev.validate()?;
        }
        if self.events.windows(2).any(|w| w[0].t_i > w[1].t_i) {
            return Err(Error::Schema {
                path: "events".into(),
                message: "events must be sorted by t_i_years".into(),
            });
        }
        Ok(())
    }
}

/// `alpha'(t) = alpha + sum_i eps_i (1 + (2/pi) atan((t - t_i)/omega_i))`.
pub fn alpha_prime(t: f64, baseline_alpha: f64, events: &[PolicyEvent]) -> f64 {
    events
        .iter()
        .fold(baseline_alpha, |acc, ev| acc + ev.increment(t))
}

/// One point of a projected trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPoint {
    pub t_years: f64,
    pub alpha: f64,
    pub y: f64,
    pub share: f64,
    pub cti: f64,
    pub region: Region,
}

/// Log-odds, share and CTI at time `t` under a scenario.
pub fn project_policy(t: f64, scenario: &Scenario, cfg: &EmaConfig) -> Result<ProjectionPoint> {
    if !t.is_finite() {
        return Err(Error::domain("time must be finite"));
    }
    let alpha = alpha_prime(t, scenario.baseline.alpha, &scenario.events);
    let y = share::trial_with_alpha(t, alpha, &scenario.baseline);
    let p = share::share_from_log_odds(y);
    let cti = ema::cti_from_share(p, cfg)?;
    Ok(ProjectionPoint {
        t_years: t,
        alpha,
        y,
        share: p,
        cti,
        region: ema::classify(cti)?,
    })
}

/// Baseline trajectory of a parameter set with no interventions.
pub fn project_trajectory(
    params: &ShareCurveParams,
    cfg: &EmaConfig,
    t_grid: &[f64],
) -> Result<Vec<ProjectionPoint>> {
    let scenario = Scenario {
        label: String::new(),
        baseline: *params,
        events: Vec::new(),
    };
    t_grid
        .iter()
        .map(|&t| project_policy(t, &scenario, cfg))
        .collect()
}

/// A row of a long-format scenario comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub label: String,
    pub point: ProjectionPoint,
}

/// Projects every scenario over the grid, scenario-major.
///
/// All scenarios must share the same baseline parameters.
pub fn compare_scenarios(
    scenarios: &[Scenario],
    cfg: &EmaConfig,
    t_grid: &[f64],
) -> Result<Vec<ScenarioRow>> {
    let first = scenarios
        .first()
        .ok_or_else(|| Error::domain("at least one scenario is required"))?;
    if let Some(other) = scenarios.iter().find(|s| s.baseline != first.baseline) {
        return Err(Error::MixedBaseline(format!(
            "`{}` differs from `{}`",
            other.label, first.label
        )));
    }
    let mut rows = Vec::with_capacity(scenarios.len() * t_grid.len());
    for sc in scenarios {
        for &t in t_grid {
            rows.push(ScenarioRow {
                label: sc.label.clone(),
                point: project_policy(t, sc, cfg)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn japan() -> ShareCurveParams {
        reference::params("Japan").unwrap()
    }

    #[test]
    fn alpha_prime_values() {
        let ev = PolicyEvent::new(0.2, 15.0, 10.0).unwrap();
        assert!((alpha_prime(15.0, 0.3, &[ev]) - 0.5).abs() < 1e-15);
        assert!((alpha_prime(25.0, 0.3, &[ev]) - 0.6).abs() < 1e-12);
        let far = alpha_prime(15.0 - 1000.0, 0.3, &[ev]);
        let expected = 0.3 + 0.2 * (1.0 - FRAC_2_PI * 100f64.atan());
        assert!((far - expected).abs() < 1e-15);
        assert!((far - 0.3 - 0.0064 * 0.2).abs() < 1e-5);
        assert_eq!(alpha_prime(7.0, 0.3, &[]), 0.3);
    }

    #[test]
    fn rejects_bad_events() {
        assert!(PolicyEvent::new(-0.1, 15.0, 10.0).is_err());
        assert!(PolicyEvent::new(0.1, 15.0, 0.0).is_err());
        assert!(PolicyEvent::new(0.1, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn japan_policy_point() {
        let sc = Scenario::new(
            "eps0.2",
            japan(),
            vec![PolicyEvent::new(0.2, 15.0, 10.0).unwrap()],
        )
        .unwrap();
        let pt = project_policy(30.0, &sc, &EmaConfig::default()).unwrap();
        assert!((pt.alpha - 0.650133).abs() < 1e-6, "{}", pt.alpha);
        let expected = (pt.alpha * 30.0 + 6.697) * (0.269 - 0.6f64.tanh());
        assert_eq!(pt.y, expected);
        assert!((pt.y + 7.023).abs() < 1e-3, "{}", pt.y);
    }

    #[test]
    fn zero_policy_is_identity() {
        let cfg = EmaConfig::default();
        let sc = Scenario::new(
            "eps0",
            japan(),
            vec![PolicyEvent::new(0.0, 15.0, 10.0).unwrap()],
        )
        .unwrap();
        for k in 0..=80 {
            let t = f64::from(k) * 0.5;
            let pt = project_policy(t, &sc, &cfg).unwrap();
            assert_eq!(pt.y.to_bits(), share::y_trial(t, &japan()).to_bits());
            assert_eq!(pt.share.to_bits(), share::share_at(t, &japan()).to_bits());
        }
    }

    #[test]
    fn events_sorted() {
        let sc = Scenario::new(
            "two",
            japan(),
            vec![
                PolicyEvent::new(0.1, 20.0, 5.0).unwrap(),
                PolicyEvent::new(0.1, 10.0, 5.0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(sc.events[0].t_i, 10.0);
        sc.validate().unwrap();
    }

    #[test]
    fn comparison_table() {
        let cfg = EmaConfig::default();
        let scenarios: Vec<Scenario> = [0.0, 0.1, 0.2]
            .iter()
            .map(|&e| {
                Scenario::new(
                    format!("eps={e}"),
                    japan(),
                    vec![PolicyEvent::new(e, 15.0, 10.0).unwrap()],
                )
                .unwrap()
            })
            .collect();
        let grid: Vec<f64> = (0..=40).map(f64::from).collect();
        let rows = compare_scenarios(&scenarios, &cfg, &grid).unwrap();
        assert_eq!(rows.len(), 3 * 41);
        for r in &rows {
            assert_eq!(r.point.region, ema::classify(r.point.cti).unwrap());
        }
        let at30: Vec<f64> = rows
            .iter()
            .filter(|r| r.point.t_years == 30.0)
            .map(|r| r.point.cti)
            .collect();
        assert!(at30[2] > at30[1] && at30[1] > at30[0]);

        let mut other = scenarios[1].clone();
        other.baseline.beta += 1.0;
        assert!(matches!(
            compare_scenarios(&[scenarios[0].clone(), other], &cfg, &grid),
            Err(Error::MixedBaseline(_))
        ));
        assert!(compare_scenarios(&[], &cfg, &grid).is_err());
    }
}
