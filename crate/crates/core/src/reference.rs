//! Published trial-function parameters for twelve countries, all with
//! `T = 50` years.
//!
//! The first six are early-stage markets whose data follow the quadratic
//! regime (lead time zero); the last six are mature markets fitted in the
//! linear regime with a nonzero lead time.

use crate::share::{ModelKind, ShareCurveParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountryRow {
    pub country: &'static str,
    pub params: ShareCurveParams,
    /// Regime the country's data were fitted in.
    pub regime: ModelKind,
}

const fn row(
    country: &'static str,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta_t0: f64,
    regime: ModelKind,
) -> CountryRow {
    CountryRow {
        country,
        params: ShareCurveParams {
            alpha,
            beta,
            gamma,
            period: 50.0,
            delta_t0,
        },
        regime,
    }
}

use ModelKind::{Linear, Quadratic};

pub const COUNTRIES: [CountryRow; 12] = [
    row("Hungary", 0.160, 3.498, 0.397, 0.0, Quadratic),
    row("Italy", 0.305, 5.195, 0.228, 0.0, Quadratic),
    row("Japan", 0.325, 6.697, 0.269, 0.0, Quadratic),
    row("Croatia", 0.585, 7.857, 0.206, 0.0, Quadratic),
    row("Slovenia", 0.165, 5.097, 0.190, 0.0, Quadratic),
    row("Slovakia", 0.160, 2.436, 0.397, 0.0, Quadratic),
    row("Finland", 0.119, 1.679, 0.30, 15.0, Linear),
    row("Sweden", 0.153, 1.583, 0.21, 11.0, Linear),
    row("UK", 0.133, 1.920, 0.30, 15.0, Linear),
    row("Netherlands", 0.122, 1.411, 0.26, 13.0, Linear),
    row("Denmark", 0.261, 4.367, 0.30, 16.0, Linear),
    row("Portugal", 0.155, 2.054, 0.30, 13.0, Linear),
];

/// Looks up a row by country name (case-insensitive).
pub fn lookup(country: &str) -> Option<&'static CountryRow> {
    COUNTRIES
        .iter()
        .find(|r| r.country.eq_ignore_ascii_case(country))
}

pub fn params(country: &str) -> Option<ShareCurveParams> {
    lookup(country).map(|r| r.params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_valid() {
        for r in &COUNTRIES {
            r.params.validate().unwrap();
            assert_eq!(
                r.regime == Quadratic,
                r.params.delta_t0 == 0.0,
                "{}",
                r.country
            );
        }
        assert_eq!(params("hungary").unwrap().beta, 3.498);
        assert!(lookup("Atlantis").is_none());
    }
}
