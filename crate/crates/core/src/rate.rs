//! Growth rate of the CTI along a share trajectory.
//!
//! By the chain rule `dCTI/dt = 10 / (s_e ln(s_cl/s_c)) * ds_e/dt`, with
//! `ds_e/dt = ds_e/dp * dp/dt` and `dp/dt = a2(t) p (1 - p)`.

use serde::{Deserialize, Serialize};

use crate::ema::{self, EmaConfig};
use crate::error::{Error, Result};
use crate::share::{self, ShareCurveParams};

/// Rate quantities at one time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub t_years: f64,
    pub share: f64,
    pub sigma_e: f64,
    pub dsigma_dt: f64,
    pub dcti_dt: f64,
}

/// `1 - B/sqrt(B^2 - 4AC)`, evaluated without cancellation for either sign of `B`.
fn one_minus_b_over_root(p: f64, cfg: &EmaConfig) -> f64 {
    let b = cfg.b(p);
    let root = cfg.discriminant(p).sqrt();
    if b <= 0.0 {
        1.0 - b / root
    } else {
        -4.0 * cfg.a() * cfg.c() / ((root + b) * root)
    }
}

fn dsigma_dp_unchecked(p: f64, cfg: &EmaConfig) -> f64 {
    // (1/2A) dB/dp (B/sqrt(D) - 1) with dB/dp = -(A + 1) delta_sigma.
    (cfg.a() + 1.0) * cfg.delta_sigma() / (2.0 * cfg.a()) * one_minus_b_over_root(p, cfg)
}

/// Sensitivity of the effective conductivity to the cashless share; positive.
pub fn dsigma_dp(p: f64, cfg: &EmaConfig) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "share must be strictly inside (0,1) for rate evaluation, got {p}"
        )));
    }
    Ok(dsigma_dp_unchecked(p, cfg))
}

/// `p (1 - p)` of the logistic share at log-odds `y`, accurate for large `|y|`.
fn logistic_spread(y: f64) -> f64 {
    let c = (0.5 * y).cosh();
    0.25 / (c * c)
}

/// Time derivative of the effective conductivity along the trial trajectory.
pub fn dsigma_dt(t: f64, params: &ShareCurveParams, cfg: &EmaConfig) -> f64 {
    let y = share::y_trial(t, params);
    let p = share::share_from_log_odds(y);
    dsigma_dp_unchecked(p, cfg) * share::slope_a2(t, params) * logistic_spread(y)
}

/// CTI units per year; the normalization matches the CTI definition.
pub fn dcti_dt(t: f64, params: &ShareCurveParams, cfg: &EmaConfig) -> Result<f64> {
    Ok(sample(t, params, cfg)?.dcti_dt)
}

fn cti_scale(cfg: &EmaConfig) -> f64 {
    if cfg.sigma_cash() == 1.0 {
        cfg.sigma_cashless().ln()
    } else {
        (cfg.sigma_cashless() / cfg.sigma_cash()).ln()
    }
}

/// All rate quantities at time `t`.
pub fn sample(t: f64, params: &ShareCurveParams, cfg: &EmaConfig) -> Result<RateSample> {
    if !t.is_finite() {
        return Err(Error::domain("time must be finite"));
    }
    let p = share::share_at(t, params);
    let sigma_e = ema::solve_two_phase(p, cfg)?;
    let ds = dsigma_dt(t, params, cfg);
    Ok(RateSample {
        t_years: t,
        share: p,
        sigma_e,
        dsigma_dt: ds,
        dcti_dt: 10.0 * ds / (sigma_e * cti_scale(cfg)),
    })
}

/// Evaluates [`sample`] over a time grid.
pub fn rate_profile(
    params: &ShareCurveParams,
    cfg: &EmaConfig,
    t_grid: &[f64],
) -> Result<Vec<RateSample>> {
    t_grid.iter().map(|&t| sample(t, params, cfg)).collect()
}
