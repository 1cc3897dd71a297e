//! Effective-medium conductivity of a cash/cashless transaction network and
//! the Cashless Transaction Index (CTI) built on it.
//!
//! Individuals paying in cash play the role of a poorly conducting phase
//! (conductivity `sigma_cash`), cashless payers the well conducting phase
//! (`sigma_cashless`). The self-consistent effective conductivity solves
//!
//! ```text
//! sum_i f_i (s_i - s_e) / (s_i + (z/2 - 1) s_e) = 0
//! ```
//!
//! which for two phases with cashless share `p` is the quadratic
//! `A s_e^2 + B(p) s_e + C = 0` with `A = z/2 - 1` and `C = -s_c s_cl`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{self, Tolerance};

/// Largest fraction-sum mismatch accepted by [`solve_general`].
pub const FRACTION_SUM_TOLERANCE: f64 = 1e-9;

/// Residual target of the general mixture solver.
pub const GENERAL_RESIDUAL: f64 = 1e-12;

/// Two-phase effective-medium parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmaConfig {
    sigma_cash: f64,
    sigma_cashless: f64,
    z: f64,
}

impl Default for EmaConfig {
    /// `sigma_cash = 1`, `sigma_cashless = 10`, square cells (`z = 4`).
    fn default() -> Self {
        EmaConfig {
            sigma_cash: 1.0,
            sigma_cashless: 10.0,
            z: 4.0,
        }
    }
}

impl EmaConfig {
    /// Requires `sigma_cashless > sigma_cash > 0` and `z > 2`.
    pub fn new(sigma_cash: f64, sigma_cashless: f64, z: f64) -> Result<Self> {
        if !(sigma_cash.is_finite() && sigma_cashless.is_finite() && z.is_finite()) {
            return Err(Error::domain("EMA parameters must be finite"));
        }
        if sigma_cash <= 0.0 {
            return Err(Error::domain("sigma_cash must be positive"));
        }
        if sigma_cashless <= sigma_cash {
            return Err(Error::domain("sigma_cashless must exceed sigma_cash"));
        }
        if z <= 2.0 {
            return Err(Error::domain("coordination number z must exceed 2"));
        }
        Ok(EmaConfig {
            sigma_cash,
            sigma_cashless,
            z,
        })
    }

    pub fn sigma_cash(&self) -> f64 {
        self.sigma_cash
    }

    pub fn sigma_cashless(&self) -> f64 {
        self.sigma_cashless
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Quadratic coefficient `A = z/2 - 1`.
    pub fn a(&self) -> f64 {
        self.z / 2.0 - 1.0
    }

    /// Constant coefficient `C = -sigma_cash * sigma_cashless`.
    pub fn c(&self) -> f64 {
        -self.sigma_cash * self.sigma_cashless
    }

    /// Conductivity contrast `sigma_cashless - sigma_cash`.
    pub fn delta_sigma(&self) -> f64 {
        self.sigma_cashless - self.sigma_cash
    }

    /// Linear coefficient `B(p) = -(p s_cl A - p s_c + q s_c A - q s_cl)`, `q = 1 - p`.
    pub fn b(&self, p: f64) -> f64 {
        let a = self.a();
        let q = 1.0 - p;
        -(p * self.sigma_cashless * a - p * self.sigma_cash + q * self.sigma_cash * a
            - q * self.sigma_cashless)
    }

    /// `dB/dp = -(A + 1) * delta_sigma`, independent of `p`.
    pub fn db_dp(&self) -> f64 {
        -(self.a() + 1.0) * self.delta_sigma()
    }

    /// Discriminant `B(p)^2 - 4AC`, always positive since `A > 0 > C`.
    pub fn discriminant(&self, p: f64) -> f64 {
        let b = self.b(p);
        b * b - 4.0 * self.a() * self.c()
    }
}

fn check_share(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("share must be in [0,1], got {p}")))
    }
}

/// Effective conductivity of the two-phase mixture at cashless share `p`.
///
/// Returns the positive root of `A s^2 + B(p) s + C = 0`. The root is
/// evaluated in whichever algebraic form avoids cancellation for the sign of
/// `B`, so it stays accurate when `sigma_cash` is many decades below
/// `sigma_cashless`.
pub fn solve_two_phase(p: f64, cfg: &EmaConfig) -> Result<f64> {
    check_share(p)?;
    let a = cfg.a();
    let b = cfg.b(p);
    let sqrt_disc = cfg.discriminant(p).sqrt();
    let root = if b <= 0.0 {
        (-b + sqrt_disc) / (2.0 * a)
    } else {
        -2.0 * cfg.c() / (b + sqrt_disc)
    };
    Ok(root.clamp(cfg.sigma_cash, cfg.sigma_cashless))
}

/// One phase of a general mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub conductivity: f64,
    pub fraction: f64,
}

impl MixtureComponent {
    pub fn new(conductivity: f64, fraction: f64) -> Self {
        MixtureComponent {
            conductivity,
            fraction,
        }
    }
}

/// Self-consistency residual `sum f_i (s_i - s) / (s_i + A s)`; decreasing in `s`.
pub fn mixture_residual(components: &[MixtureComponent], z: f64, sigma_e: f64) -> f64 {
    let a = z / 2.0 - 1.0;
    components
        .iter()
        .filter(|c| c.fraction > 0.0)
        .map(|c| c.fraction * (c.conductivity - sigma_e) / (c.conductivity + a * sigma_e))
        .sum()
}

/// Effective conductivity of an arbitrary mixture, by bisection on the
/// self-consistency residual.
///
/// The search runs over `[min s_i, max s_i]` of the components present. A
/// zero-conductivity phase moves the lower end to a tiny positive floor; if
/// the residual is already non-positive there, the conducting phases do not
/// percolate and the result is exactly `0.0`.
pub fn solve_general(components: &[MixtureComponent], z: f64) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::domain("mixture needs at least one component"));
    }
    if !(z.is_finite() && z > 2.0) {
        return Err(Error::domain("coordination number z must exceed 2"));
    }
    let mut total = 0.0;
    for c in components {
        if !(c.fraction.is_finite() && (0.0..=1.0).contains(&c.fraction)) {
            return Err(Error::domain(format!(
                "component fraction must be in [0,1], got {}",
                c.fraction
            )));
        }
        if !(c.conductivity.is_finite() && c.conductivity >= 0.0) {
            return Err(Error::domain(format!(
                "component conductivity must be finite and nonnegative, got {}",
                c.conductivity
            )));
        }
        total += c.fraction;
    }
    if (total - 1.0).abs() > FRACTION_SUM_TOLERANCE {
        return Err(Error::domain(format!(
            "component fractions must sum to 1, got {total}"
        )));
    }

    let present = components.iter().filter(|c| c.fraction > 0.0);
    let (min, max) = present.fold((f64::INFINITY, 0.0_f64), |(lo, hi), c| {
        (lo.min(c.conductivity), hi.max(c.conductivity))
    });
    if max <= 0.0 {
        return Err(Error::domain("at least one component must conduct"));
    }
    let lo = if min > 0.0 {
        min
    } else {
        max * f64::MIN_POSITIVE.sqrt()
    };
    let residual = |s: f64| mixture_residual(components, z, s);
    if min == 0.0 && residual(lo) <= 0.0 {
        return Ok(0.0);
    }
    roots::bisect(
        residual,
        lo,
        max,
        Tolerance {
            residual: GENERAL_RESIDUAL / 2.0,
            max_iterations: 4000,
        },
    )
}

/// CTI of an effective conductivity, on the 0..10 logarithmic scale.
///
/// With `sigma_cash = 1` this is `10 log10(s_e) / log10(s_cl)`; otherwise the
/// conductivity is measured relative to `sigma_cash` so the scale still spans
/// exactly 0..10.
pub fn cti_from_conductivity(sigma_e: f64, cfg: &EmaConfig) -> f64 {
    let cti = if cfg.sigma_cash == 1.0 {
        10.0 * sigma_e.log10() / cfg.sigma_cashless.log10()
    } else {
        10.0 * (sigma_e / cfg.sigma_cash).ln() / (cfg.sigma_cashless / cfg.sigma_cash).ln()
    };
    cti.clamp(0.0, 10.0)
}

/// Cashless Transaction Index at share `p`.
pub fn cti_from_share(p: f64, cfg: &EmaConfig) -> Result<f64> {
    Ok(cti_from_conductivity(solve_two_phase(p, cfg)?, cfg))
}

/// Inverse of [`cti_from_share`]: the cashless share that produces `cti`.
pub fn share_from_cti(cti: f64, cfg: &EmaConfig) -> Result<f64> {
    if !(0.0..=10.0).contains(&cti) {
        return Err(Error::domain(format!("CTI must be in [0,10], got {cti}")));
    }
    let sigma_e = if cfg.sigma_cash == 1.0 {
        cfg.sigma_cashless.powf(cti / 10.0)
    } else {
        cfg.sigma_cash * (cfg.sigma_cashless / cfg.sigma_cash).powf(cti / 10.0)
    };
    // B from the quadratic, then p from B(p) being affine in p.
    let a = cfg.a();
    let b = -(a * sigma_e * sigma_e + cfg.c()) / sigma_e;
    let p = (cfg.sigma_cashless - cfg.sigma_cash * a - b) / ((a + 1.0) * cfg.delta_sigma());
    Ok(p.clamp(0.0, 1.0))
}

/// Cashless grade, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    Inception,
    Transitioning,
    TippingPoint,
    NearlyCashless,
}

impl Region {
    pub const ALL: [Region; 4] = [
        Region::Inception,
        Region::Transitioning,
        Region::TippingPoint,
        Region::NearlyCashless,
    ];

    /// CTI interval `[lower, upper)` of the region (upper-inclusive at 10).
    pub fn cti_range(self) -> (f64, f64) {
        match self {
            Region::Inception => (0.0, 2.5),
            Region::Transitioning => (2.5, 5.0),
            Region::TippingPoint => (5.0, 7.5),
            Region::NearlyCashless => (7.5, 10.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Inception => "Inception",
            Region::Transitioning => "Transitioning",
            Region::TippingPoint => "TippingPoint",
            Region::NearlyCashless => "NearlyCashless",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Grades a CTI value. Boundaries at 2.5, 5 and 7.5 belong to the upper region.
pub fn classify(cti: f64) -> Result<Region> {
    if !(0.0..=10.0).contains(&cti) {
        return Err(Error::domain(format!("CTI must be in [0,10], got {cti}")));
    }
    Ok(if cti < 2.5 {
        Region::Inception
    } else if cti < 5.0 {
        Region::Transitioning
    } else if cti < 7.5 {
        Region::TippingPoint
    } else {
        Region::NearlyCashless
    })
}

fn check_z(z: f64) -> Result<()> {
    if z.is_finite() && z > 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "coordination number z must exceed 2, got {z}"
        )))
    }
}

/// Percolation threshold `1/(z - 1)` used by the curve-width calibration.
pub fn calibration_threshold(z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(1.0 / (z - 1.0))
}

/// Share `2/z` at which the two-phase solution leaves zero when `sigma_cash -> 0`.
///
/// With `sigma_cash = 0` the quadratic degenerates to
/// `s_e = s_cl (p (A + 1) - 1) / A` above this share and `0` below it.
pub fn ema_insulator_threshold(z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(2.0 / z)
}
