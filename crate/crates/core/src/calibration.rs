//! Calibration of the share trial function from observed series.
//!
//! Both log-odds regimes are fitted by least squares, one is selected by R²,
//! and the trial parameters are recovered by coefficient matching. Mature
//! markets (linear regime) additionally get a lead time `delta_t0` estimated
//! from the curve width `tau`.

use serde::{Deserialize, Serialize};

use crate::data::CountrySeries;
use crate::ema;
use crate::error::{Error, Result};
use crate::ols;
use crate::share::{self, FitModel, LogisticFit, ModelKind, ShareCurveParams, TrialShape};

/// R² differences below this count as a tie, resolved to the linear model.
pub const R_SQUARED_TIE: f64 = 1e-9;

/// Fits `ln(1/p - 1)` on `{1, t}` or `{1, t, t^2}` for a series, with `t`
/// counted from its earliest year.
pub fn fit_transform(series: &CountrySeries, model: ModelKind) -> Result<LogisticFit> {
    fit_points(&series.points(), model, series.t_origin())
}

/// [`fit_transform`] on raw `(t, share)` points.
pub fn fit_points(points: &[(f64, f64)], model: ModelKind, t_origin: i32) -> Result<LogisticFit> {
    let ts: Vec<f64> = points.iter().map(|&(t, _)| t).collect();
    let ys = points
        .iter()
        .map(|&(_, p)| share::log_odds(p))
        .collect::<Result<Vec<_>>>()?;
    let degree = match model {
        ModelKind::Linear => 1,
        ModelKind::Quadratic => 2,
    };
    let fit = ols::fit_polynomial(&ts, &ys, degree)?;
    let c = &fit.coefficients;
    let model = match model {
        ModelKind::Linear => FitModel::Linear {
            a2: -c[1],
            mu1: c[0],
        },
        ModelKind::Quadratic => FitModel::Quadratic {
            b: -2.0 * c[2],
            a20: -c[1],
            mu2: c[0],
        },
    };
    Ok(LogisticFit {
        model,
        r_squared: fit.r_squared,
        t_origin,
    })
}

/// Picks the fit with the larger R²; near-ties go to the linear model.
pub fn select_model(linear: &LogisticFit, quadratic: &LogisticFit) -> ModelKind {
    if quadratic.r_squared - linear.r_squared >= R_SQUARED_TIE {
        ModelKind::Quadratic
    } else {
        ModelKind::Linear
    }
}

/// Characteristic width of a fitted share curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveWidth {
    #[serde(rename = "tau_years")]
    pub tau: f64,
    /// Time at which the fitted share is one half.
    #[serde(rename = "t_half_years")]
    pub t_half: f64,
    #[serde(rename = "t1_years")]
    pub t1: f64,
    #[serde(rename = "t2_years")]
    pub t2: f64,
}

/// Times at which `c0 + c1 t + c2 t^2 = level` on the branch where the
/// polynomial decreases, preferring the smallest nonnegative one.
fn decreasing_crossing(coeffs: [f64; 3], level: f64) -> Result<f64> {
    let [c0, c1, c2] = coeffs;
    let c0 = c0 - level;
    let mut roots = Vec::with_capacity(2);
    if c2 == 0.0 {
        if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Stable pair: q = -(c1 + sign(c1) sq) / 2, roots q/c2 and c0/q.
            let q = -0.5 * (c1 + c1.signum() * sq);
            if q != 0.0 {
                roots.push(q / c2);
                roots.push(c0 / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let slope = |t: f64| c1 + 2.0 * c2 * t;
    let mut candidates: Vec<f64> = roots
        .into_iter()
        .filter(|t| t.is_finite() && slope(*t) < 0.0)
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates
        .iter()
        .copied()
        .find(|t| *t >= 0.0)
        .or_else(|| candidates.last().copied())
        .ok_or(Error::NoRealRoot { level })
}

/// Width `tau = 2 (t2 - t1)` of the share curve implied by a fit.
///
/// For a quadratic fit `t1` is where the share reaches the percolation
/// threshold `p_c` and `t2` where it reaches one half. For a linear fit `t1`
/// is the half-share time and `t2` where the share reaches `1 - p_c`.
pub fn curve_width(fit: &LogisticFit, z: f64) -> Result<CurveWidth> {
    let pc = ema::calibration_threshold(z)?;
    let coeffs = fit.coefficients();
    let (t1, t2) = match fit.kind() {
        ModelKind::Quadratic => (
            decreasing_crossing(coeffs, (1.0 / pc - 1.0).ln())?,
            decreasing_crossing(coeffs, 0.0)?,
        ),
        ModelKind::Linear => (
            decreasing_crossing(coeffs, 0.0)?,
            decreasing_crossing(coeffs, (1.0 / (1.0 - pc) - 1.0).ln())?,
        ),
    };
    let t_half = match fit.kind() {
        ModelKind::Quadratic => t2,
        ModelKind::Linear => t1,
    };
    if !(t2 > t1) {
        return Err(Error::domain(format!(
            "degenerate curve width: t1 = {t1}, t2 = {t2}"
        )));
    }
    Ok(CurveWidth {
        tau: 2.0 * (t2 - t1),
        t_half,
        t1,
        t2,
    })
}

/// Estimated lead time between the start of cashless activity and the first
/// data year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadTime {
    /// Lead time in years, never negative.
    pub years: f64,
    /// Value before clamping at zero.
    pub raw: f64,
}

impl LeadTime {
    pub fn was_clamped(&self) -> bool {
        self.raw < 0.0
    }

    pub fn warning(&self) -> Option<String> {
        self.was_clamped()
            .then(|| format!("lead time {:.4} years is negative; clamped to 0", self.raw))
    }
}

/// `delta_t0 = |t_half| + tau` when the half-share time precedes the data,
/// otherwise `tau - t_half`; clamped at zero.
pub fn delta_t0(width: &CurveWidth) -> LeadTime {
    let raw = if width.t_half < 0.0 {
        width.t_half.abs() + width.tau
    } else {
        width.tau - width.t_half
    };
    LeadTime {
        years: raw.max(0.0),
        raw,
    }
}

/// Model selection policy for [`calibrate_country`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    #[default]
    Auto,
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    /// `gamma` assumed for linear-regime countries.
    pub gamma: f64,
    /// Trial-function time scale `T` in years.
    pub period: f64,
    /// Coordination number fixing the percolation threshold.
    pub z: f64,
    pub model: ModelChoice,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            gamma: 0.3,
            period: 50.0,
            z: 4.0,
            model: ModelChoice::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub country: String,
    pub selected: ModelKind,
    pub params: ShareCurveParams,
    pub width: CurveWidth,
    pub linear: LogisticFit,
    /// Absent when the series is too short for a quadratic fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<LogisticFit>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl CalibrationReport {
    pub fn selected_fit(&self) -> &LogisticFit {
        match (self.selected, &self.quadratic) {
            (ModelKind::Quadratic, Some(q)) => q,
            _ => &self.linear,
        }
    }

    /// Calendar year at which the trial-function time is zero.
    pub fn start_year(&self) -> f64 {
        f64::from(self.linear.t_origin) - self.params.delta_t0
    }
}

/// Full calibration of one country: fit, select, match, and lead time.
pub fn calibrate_country(
    series: &CountrySeries,
    opts: &CalibrationOptions,
) -> Result<CalibrationReport> {
    if !(opts.gamma > 0.0 && opts.gamma < 1.0) {
        return Err(Error::domain(format!(
            "gamma must lie strictly inside (0,1), got {}",
            opts.gamma
        )));
    }
    if !(opts.period > 0.0) {
        return Err(Error::domain("T must be positive"));
    }
    let mut warnings = Vec::new();
    let linear = fit_transform(series, ModelKind::Linear)?;
    let quadratic = match fit_transform(series, ModelKind::Quadratic) {
        Ok(q) => Some(q),
        Err(Error::InsufficientData { .. }) if opts.model != ModelChoice::Quadratic => {
            warnings.push(format!(
                "{} observations are too few for a quadratic fit; using the linear model",
                series.len()
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let selected = match (opts.model, &quadratic) {
        (ModelChoice::Linear, _) | (ModelChoice::Auto, None) => ModelKind::Linear,
        (ModelChoice::Quadratic, _) => ModelKind::Quadratic,
        (ModelChoice::Auto, Some(q)) => select_model(&linear, q),
    };

    let (shape, width, lead) = match selected {
        ModelKind::Quadratic => {
            let q = quadratic.as_ref().expect("quadratic fit present");
            let FitModel::Quadratic { b, a20, mu2 } = q.model else {
                unreachable!("quadratic fit has quadratic coefficients")
            };
            let shape = share::match_from_quadratic(b, a20, mu2, opts.period)?;
            (shape, curve_width(q, opts.z)?, 0.0)
        }
        ModelKind::Linear => {
            let FitModel::Linear { a2, mu1 } = linear.model else {
                unreachable!("linear fit has linear coefficients")
            };
            let width = curve_width(&linear, opts.z)?;
            let lead = delta_t0(&width);
            warnings.extend(lead.warning());
            let mu1_shifted = share::shifted_intercept(a2, mu1, lead.years);
            let shape = share::match_from_linear(a2, mu1_shifted, opts.gamma)?;
            (shape, width, lead.years)
        }
    };
    let TrialShape { alpha, beta, gamma } = shape;
    if !(gamma > 0.0 && gamma < 1.0) {
        warnings.push(format!("recovered gamma {gamma} lies outside (0,1)"));
    }
    Ok(CalibrationReport {
        country: series.country().to_owned(),
        selected,
        params: ShareCurveParams {
            alpha,
            beta,
            gamma,
            period: opts.period,
            delta_t0: lead,
        },
        width,
        linear,
        quadratic,
        warnings,
    })
}
