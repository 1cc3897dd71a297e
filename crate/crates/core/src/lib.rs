//! Cashless Transaction Index (CTI) from an effective-medium model of a
//! cash/cashless payment mixture.
//!
//! The crate maps a cashless share `p` to an effective conductivity and a
//! 0..10 index ([`ema`]), models the share over time with a logistic trial
//! function ([`share`]), calibrates that function from country series
//! ([`calibration`]), and forecasts the index growth rate ([`rate`]) and
//! policy scenarios ([`policy`]).
//!
//! ```
//! use cashless_cti::ema::{self, EmaConfig, Region};
//!
//! let cfg = EmaConfig::default();
//! let cti = ema::cti_from_share(0.5, &cfg).unwrap();
//! assert!((cti - 5.0).abs() < 1e-9);
//! assert_eq!(ema::classify(cti).unwrap(), Region::TippingPoint);
//! ```

// Guards are written as negated comparisons so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod data;
pub mod ema;
pub mod error;
pub mod grid;
pub mod ols;
pub mod plot;
pub mod policy;
pub mod rate;
pub mod reference;
pub mod roots;
pub mod share;

pub use error::{Error, Result};
