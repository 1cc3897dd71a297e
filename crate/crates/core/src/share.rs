//! Logistic share dynamics.
//!
//! The cashless share obeys `dp/dt = a2(t) p (1 - p)`, so the log-odds
//! transform `y = ln(1/p - 1)` evolves as `dy/dt = -a2(t)`. Two regimes are
//! fitted from data (`a2` constant, or linear in `t`) and a single trial
//! function
//!
//! ```text
//! y(t) = (alpha t + beta) (gamma - tanh(t / T))
//! ```
//!
//! interpolates between them: quadratic in `t` for `t << T`, linear for
//! `t >> T`. Time is measured in years since the start of cashless activity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{self, Tolerance};

/// Parameters of the trial function for one country.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareCurveParams {
    #[serde(rename = "alpha_per_year")]
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(rename = "T_years")]
    pub period: f64,
    #[serde(rename = "delta_t0_years")]
    pub delta_t0: f64,
}

impl ShareCurveParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, period: f64, delta_t0: f64) -> Result<Self> {
        let params = ShareCurveParams {
            alpha,
            beta,
            gamma,
            period,
            delta_t0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks `alpha > 0`, `beta > 0`, `0 < gamma < 1`, `T > 0`, `delta_t0 >= 0`.
    ///
    /// On failure the error names the offending document key.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, rule: &str, value: f64| {
            Err(Error::Schema {
                path: key.to_owned(),
                message: format!("{rule}, got {value}"),
            })
        };
        let all = [
            self.alpha,
            self.beta,
            self.gamma,
            self.period,
            self.delta_t0,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Schema {
                path: "params".into(),
                message: "all parameters must be finite".into(),
            });
        }
        if self.alpha <= 0.0 {
            return bad("alpha_per_year", "must be positive", self.alpha);
        }
        if self.beta <= 0.0 {
            return bad("beta", "must be positive", self.beta);
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad("gamma", "must lie strictly inside (0,1)", self.gamma);
        }
        if self.period <= 0.0 {
            return bad("T_years", "must be positive", self.period);
        }
        if self.delta_t0 < 0.0 {
            return bad("delta_t0_years", "must be nonnegative", self.delta_t0);
        }
        Ok(())
    }
}

/// Which regime of `a2(t)` a fit assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// `a2` constant: `y = -a2 t + mu1`.
    Linear,
    /// `a2 = a20 + b t`: `y = -b t^2 / 2 - a20 t + mu2`.
    Quadratic,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Quadratic => "quadratic",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// Coefficients of a fitted log-odds transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FitModel {
    Linear {
        #[serde(rename = "a2_per_year")]
        a2: f64,
        mu1: f64,
    },
    Quadratic {
        #[serde(rename = "b_per_year2")]
        b: f64,
        #[serde(rename = "a20_per_year")]
        a20: f64,
        mu2: f64,
    },
}

/// A least-squares fit of `ln(1/p - 1)` against years since `t_origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub model: FitModel,
    pub r_squared: f64,
    /// Calendar year at which `t = 0`.
    pub t_origin: i32,
}

impl LogisticFit {
    pub fn kind(&self) -> ModelKind {
        match self.model {
            FitModel::Linear { .. } => ModelKind::Linear,
            FitModel::Quadratic { .. } => ModelKind::Quadratic,
        }
    }

    /// Polynomial coefficients `[c0, c1, c2]` of `y = c0 + c1 t + c2 t^2`.
    ///
    /// In the quadratic naming these are `(k3, k2, k1)`, in the linear naming
    /// `(h2, h1, 0)`.
    pub fn coefficients(&self) -> [f64; 3] {
        match self.model {
            FitModel::Linear { a2, mu1 } => [mu1, -a2, 0.0],
            FitModel::Quadratic { b, a20, mu2 } => [mu2, -a20, -0.5 * b],
        }
    }

    /// Evaluates the fitted transform at `t` years after `t_origin`.
    pub fn eval(&self, t: f64) -> f64 {
        match self.model {
            FitModel::Linear { a2, mu1 } => -a2 * t + mu1,
            FitModel::Quadratic { b, a20, mu2 } => -0.5 * b * t * t - a20 * t + mu2,
        }
    }

    /// Slope of the transform, `dy/dt`.
    pub fn derivative(&self, t: f64) -> f64 {
        let [_, c1, c2] = self.coefficients();
        c1 + 2.0 * c2 * t
    }
}

/// Evaluates a fitted transform; see [`LogisticFit::eval`].
pub fn eval_fit(fit: &LogisticFit, t: f64) -> f64 {
    fit.eval(t)
}

/// Intercept of a linear fit re-referenced to the start of cashless
/// activity, `mu1' = mu1 - a2 * delta_t0`.
pub fn shifted_intercept(a2: f64, mu1: f64, delta_t0: f64) -> f64 {
    mu1 - a2 * delta_t0
}

/// `y = ln(1/p - 1)`; defined for `0 < p < 1`.
pub fn log_odds(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "share must be strictly inside (0,1) for the log-odds transform, got {p}"
        )));
    }
    Ok(((1.0 - p) / p).ln())
}

/// `p = 1 / (1 + e^y)`, the inverse of [`log_odds`].
pub fn share_from_log_odds(y: f64) -> f64 {
    if y > 0.0 {
        let e = (-y).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + y.exp())
    }
}

pub(crate) fn trial_with_alpha(t: f64, alpha: f64, params: &ShareCurveParams) -> f64 {
    (alpha * t + params.beta) * (params.gamma - (t / params.period).tanh())
}

/// Trial log-odds `y(t) = (alpha t + beta)(gamma - tanh(t/T))`.
pub fn y_trial(t: f64, params: &ShareCurveParams) -> f64 {
    trial_with_alpha(t, params.alpha, params)
}

/// Cashless share predicted by the trial function.
pub fn share_at(t: f64, params: &ShareCurveParams) -> f64 {
    share_from_log_odds(y_trial(t, params))
}

/// Growth coefficient `a2(t) = -dy/dt` of the trial function.
pub fn slope_a2(t: f64, params: &ShareCurveParams) -> f64 {
    let x = t / params.period;
    let sech = 1.0 / x.cosh();
    -params.alpha * (params.gamma - x.tanh())
        + (params.alpha * t + params.beta) * sech * sech / params.period
}

/// Time of the maximum of `y`, where `a2` first crosses zero.
///
/// Exists only when `a2(0) < 0`; the search covers `(0, 10 T]`, beyond which
/// `a2` has settled at its positive limit `alpha (1 - gamma)`.
pub fn y_extremum_time(params: &ShareCurveParams) -> Option<f64> {
    if slope_a2(0.0, params) >= 0.0 {
        return None;
    }
    const STEPS: usize = 10_000;
    let horizon = 10.0 * params.period;
    let step = horizon / STEPS as f64;
    let mut prev = 0.0;
    for i in 1..=STEPS {
        let t = step * i as f64;
        if slope_a2(t, params) >= 0.0 {
            let tol = Tolerance {
                residual: 1e-13,
                max_iterations: 200,
            };
            return roots::bisect(|s| slope_a2(s, params), prev, t, tol).ok();
        }
        prev = t;
    }
    None
}

/// Time `T atanh(gamma)` at which the trial share crosses one half.
pub fn half_share_time(params: &ShareCurveParams) -> Result<f64> {
    half_share_time_for(params.gamma, params.period)
}

/// [`half_share_time`] from `gamma` and `T` alone; accepts `0 <= gamma < 1`.
pub fn half_share_time_for(gamma: f64, period: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "gamma must be in [0,1), got {gamma}"
        )));
    }
    if !(period > 0.0) {
        return Err(Error::domain("T must be positive"));
    }
    Ok(period * gamma.atanh())
}

/// Large-time limit `(gamma - 1)(alpha t + beta)` of the trial function.
pub fn asymptote_linear(params: &ShareCurveParams, t: f64) -> f64 {
    (params.gamma - 1.0) * (params.alpha * t + params.beta)
}

/// Small-time limit `-(alpha/T) t^2 + (alpha gamma - beta/T) t + beta gamma`.
pub fn asymptote_quadratic(params: &ShareCurveParams, t: f64) -> f64 {
    let ShareCurveParams {
        alpha,
        beta,
        gamma,
        period,
        ..
    } = *params;
    -(alpha / period) * t * t + (alpha * gamma - beta / period) * t + beta * gamma
}

/// Modulation `(gamma - tanh(t/T)) / (gamma - 1)` carrying the linear
/// asymptote onto the trial function.
pub fn modulation_factor(t: f64, params: &ShareCurveParams) -> f64 {
    (params.gamma - (t / params.period).tanh()) / (params.gamma - 1.0)
}

/// Shape parameters recovered from fitted coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialShape {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Recovers `(alpha, beta, gamma)` from a quadratic fit by matching it with
/// the small-time expansion of the trial function.
///
/// `alpha = b T / 2`, `beta` is the positive root of
/// `beta^2 / T - a20 beta - alpha mu2 = 0`, and `gamma = mu2 / beta`.
pub fn match_from_quadratic(b: f64, a20: f64, mu2: f64, period: f64) -> Result<TrialShape> {
    if !(b > 0.0) {
        return Err(Error::domain(format!(
            "quadratic coefficient b must be positive, got {b}"
        )));
    }
    if !(period > 0.0) {
        return Err(Error::domain("T must be positive"));
    }
    if !(mu2 > 0.0) {
        return Err(Error::domain(format!(
            "intercept mu2 must be positive for a positive beta root, got {mu2}"
        )));
    }
    if !a20.is_finite() {
        return Err(Error::domain("a20 must be finite"));
    }
    let alpha = b * period / 2.0;
    // beta^2 - a20 T beta - alpha mu2 T = 0; the product of the roots is
    // negative, so exactly one is positive.
    let half = 0.5 * a20 * period;
    let c = alpha * mu2 * period;
    let root = (half * half + c).sqrt();
    let beta = if half >= 0.0 {
        half + root
    } else {
        c / (root - half)
    };
    Ok(TrialShape {
        alpha,
        beta,
        gamma: mu2 / beta,
    })
}

/// Recovers `(alpha, beta)` from a linear fit given an assumed `gamma`:
/// `(gamma - 1) alpha = -a2` and `(gamma - 1) beta = mu1'`.
pub fn match_from_linear(a2: f64, mu1_shifted: f64, gamma: f64) -> Result<TrialShape> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "assumed gamma must be in [0,1), got {gamma}"
        )));
    }
    if !(a2 > 0.0) {
        return Err(Error::domain(format!(
            "slope a2 must be positive for alpha > 0, got {a2}"
        )));
    }
    if !(mu1_shifted < 0.0) {
        return Err(Error::domain(format!(
            "shifted intercept must be negative for beta > 0, got {mu1_shifted}"
        )));
    }
    Ok(TrialShape {
        alpha: a2 / (1.0 - gamma),
        beta: mu1_shifted / (gamma - 1.0),
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn row(name: &str) -> ShareCurveParams {
        reference::params(name).unwrap()
    }

    #[test]
    fn log_odds_pairs() {
        assert_eq!(log_odds(0.5).unwrap(), 0.0);
        assert!((share_from_log_odds(std::f64::consts::LN_2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((log_odds(0.2864).unwrap() - 0.912).abs() < 1e-3);
        assert!(log_odds(0.0).is_err());
        assert!(log_odds(1.0).is_err());
        assert!(log_odds(f64::NAN).is_err());
    }

    #[test]
    fn fit_evaluation() {
        let lin = LogisticFit {
            model: FitModel::Linear { a2: 0.1, mu1: 1.0 },
            r_squared: 1.0,
            t_origin: 2000,
        };
        assert!(eval_fit(&lin, 10.0).abs() < 1e-15);
        let quad = LogisticFit {
            model: FitModel::Quadratic {
                b: 0.0064,
                a20: 0.00644,
                mu2: 1.388706,
            },
            r_squared: 1.0,
            t_origin: 2000,
        };
        assert_eq!(eval_fit(&quad, 0.0), 1.388706);
        // Re-referenced intercept of a mature-market fit.
        let mu1: f64 = -1.1753 + 0.0833 * 15.0;
        assert!((mu1 - 0.074).abs() < 5e-4);
        assert!((shifted_intercept(0.0833, mu1, 15.0) + 1.1753).abs() < 1e-12);
    }

    #[test]
    fn trial_function_values() {
        let japan = row("Japan");
        assert!((y_trial(0.0, &japan) - 1.801493).abs() < 1e-12);
        assert!((share_at(0.0, &japan) - 0.141669).abs() < 1e-6);
        assert!(share_at(500.0, &japan) > 0.999999);

        let nl = row("Netherlands");
        let y = y_trial(50.0, &nl);
        assert!((y - 7.511 * (0.26 - 1f64.tanh())).abs() < 1e-12);
        assert!((y + 3.7674).abs() < 1e-4, "{y}");

        let t = half_share_time(&japan).unwrap();
        assert!(y_trial(t, &japan).abs() < 1e-12);
        assert!((share_at(t, &japan) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slope_values() {
        let hu = row("Hungary");
        assert!((slope_a2(0.0, &hu) - 0.00644).abs() < 1e-12);
        let nl = row("Netherlands");
        assert!((slope_a2(0.0, &nl) + 0.00350).abs() < 1e-5);
        let far = slope_a2(1e4, &hu);
        assert!((far - hu.alpha * (1.0 - hu.gamma)).abs() < 1e-12);
    }

    #[test]
    fn extremum() {
        let t = y_extremum_time(&row("Netherlands")).unwrap();
        assert!((t - 0.72).abs() < 0.05, "{t}");
        assert!(slope_a2(t, &row("Netherlands")).abs() < 1e-10);
        assert_eq!(y_extremum_time(&row("Hungary")), None);

        // beta = alpha gamma T puts a2(0) exactly at zero.
        let flat = ShareCurveParams::new(0.1, 2.0, 0.5, 40.0, 0.0).unwrap();
        assert_eq!(slope_a2(0.0, &flat), 0.0);
        assert_eq!(y_extremum_time(&flat), None);
    }

    #[test]
    fn half_share() {
        let t = half_share_time_for(0.3, 50.0).unwrap();
        assert!((t - 15.476).abs() < 1e-3);
        assert!((t - 50.0 * 0.3f64.atanh()).abs() < 1e-12);
        assert_eq!(half_share_time_for(0.0, 50.0).unwrap(), 0.0);
        assert!((half_share_time_for(0.397, 50.0).unwrap() - 21.004).abs() < 1e-3);
        assert!(half_share_time_for(1.0, 50.0).is_err());
        assert!(half_share_time_for(-0.1, 50.0).is_err());
    }

    #[test]
    fn asymptotes() {
        let japan = row("Japan");
        let y = y_trial(1000.0, &japan);
        assert!((y - asymptote_linear(&japan, 1000.0)).abs() < 1e-8 * y.abs());
        assert_eq!(asymptote_quadratic(&japan, 0.0), y_trial(0.0, &japan));

        let hu = row("Hungary");
        let t = 0.5;
        let bound = (hu.alpha * t + hu.beta) * 0.01f64.powi(3) / 3.0;
        assert!((y_trial(t, &hu) - asymptote_quadratic(&hu, t)).abs() <= bound);
    }

    #[test]
    fn quadratic_matching() {
        let m = match_from_quadratic(0.0064, 0.00644, 1.388706, 50.0).unwrap();
        assert!((m.alpha - 0.160).abs() < 1e-12);
        assert!((m.beta - 3.498).abs() < 1e-6, "{}", m.beta);
        assert!((m.gamma - 0.397).abs() < 1e-6, "{}", m.gamma);

        // No linear term: beta = sqrt(alpha mu2 T).
        let m = match_from_quadratic(0.004, 0.0, 1.0, 50.0).unwrap();
        assert!((m.beta - (0.1f64 * 1.0 * 50.0).sqrt()).abs() < 1e-12);

        assert!(match_from_quadratic(0.0, 0.1, 1.0, 50.0).is_err());
        assert!(match_from_quadratic(0.01, 0.1, -1.0, 50.0).is_err());
    }

    #[test]
    fn linear_matching() {
        let m = match_from_linear(0.0833, -1.1753, 0.30).unwrap();
        assert!((m.alpha - 0.119).abs() < 1e-12);
        assert!((m.beta - 1.679).abs() < 1e-12);

        let m = match_from_linear(0.7 * 0.133, -0.7 * 1.920, 0.30).unwrap();
        assert!((m.alpha - 0.133).abs() < 1e-12);
        assert!((m.beta - 1.920).abs() < 1e-12);

        let m = match_from_linear(0.05, -2.0, 0.0).unwrap();
        assert_eq!((m.alpha, m.beta), (0.05, 2.0));

        assert!(match_from_linear(-0.05, -2.0, 0.3).is_err());
        assert!(match_from_linear(0.05, 2.0, 0.3).is_err());
        assert!(match_from_linear(0.05, -2.0, 1.0).is_err());
    }

    #[test]
    fn modulation() {
        let p = ShareCurveParams::new(0.2, 2.0, 0.3, 50.0, 0.0).unwrap();
        assert!((modulation_factor(0.0, &p) + 0.3 / 0.7).abs() < 1e-15);
        assert!((modulation_factor(1e4, &p) - 1.0).abs() < 1e-15);
        let t = half_share_time(&p).unwrap();
        assert!(modulation_factor(t, &p).abs() < 1e-15);
    }

    #[test]
    fn params_validation_names_key() {
        match ShareCurveParams::new(0.1, 1.0, 1.2, 50.0, 0.0) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "gamma"),
            other => panic!("{other:?}"),
        }
        assert!(ShareCurveParams::new(0.1, 1.0, 0.3, 50.0, -1.0).is_err());
        assert!(ShareCurveParams::new(0.0, 1.0, 0.3, 50.0, 0.0).is_err());
    }
}
