//! Randomized invariants.

use cashless_cti::calibration::{self, CalibrationOptions};
use cashless_cti::data::{self, CountrySeries, RunConfig, ShareUnit};
use cashless_cti::ema::{self, EmaConfig, MixtureComponent};
use cashless_cti::ols;
use cashless_cti::policy::{self, PolicyEvent, Scenario};
use cashless_cti::rate;
use cashless_cti::share::{self, ShareCurveParams};
use proptest::prelude::*;

fn ema_config() -> impl Strategy<Value = EmaConfig> {
    (-3.0..1.0f64, 0.05..5.0f64, 2.2..12.0f64).prop_map(|(lc, decades, z)| {
        let sc = 10f64.powf(lc);
        EmaConfig::new(sc, sc * 10f64.powf(decades), z).unwrap()
    })
}

fn trial_params() -> impl Strategy<Value = ShareCurveParams> {
    (
        0.02..0.5f64,
        0.5..8.0f64,
        0.05..0.6f64,
        20.0..80.0f64,
        0.0..20.0f64,
    )
        .prop_map(|(a, b, g, t, d)| ShareCurveParams::new(a, b, g, t, d).unwrap())
}

fn events() -> impl Strategy<Value = Vec<PolicyEvent>> {
    prop::collection::vec(
        (0.0..0.5f64, -20.0..60.0f64, 0.5..30.0f64)
            .prop_map(|(e, ti, w)| PolicyEvent::new(e, ti, w).unwrap()),
        0..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ema_bounds_and_root(cfg in ema_config(), p in 0.0..=1.0f64) {
        let s = ema::solve_two_phase(p, &cfg).unwrap();
        prop_assert!(s >= cfg.sigma_cash() && s <= cfg.sigma_cashless());
        let (a, b, c) = (cfg.a(), cfg.b(p), cfg.c());
        let scale = (a * s * s).abs() + (b * s).abs() + c.abs();
        prop_assert!((a * s * s + b * s + c).abs() <= 1e-10 * scale);
        let cti = ema::cti_from_share(p, &cfg).unwrap();
        prop_assert!((0.0..=10.0).contains(&cti));
    }

    #[test]
    fn ema_monotone(cfg in ema_config(), p in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(ema::solve_two_phase(lo, &cfg).unwrap() <= ema::solve_two_phase(hi, &cfg).unwrap());
        prop_assert!(ema::cti_from_share(lo, &cfg).unwrap() <= ema::cti_from_share(hi, &cfg).unwrap());
    }

    #[test]
    fn general_matches_two_phase(cfg in ema_config(), p in 0.0..=1.0f64) {
        let closed = ema::solve_two_phase(p, &cfg).unwrap();
        let general = ema::solve_general(
            &[
                MixtureComponent::new(cfg.sigma_cash(), 1.0 - p),
                MixtureComponent::new(cfg.sigma_cashless(), p),
            ],
            cfg.z(),
        )
        .unwrap();
        prop_assert!((general - closed).abs() <= 1e-9 * closed, "{general} vs {closed}");
    }

    #[test]
    fn cti_inverse(p in 1e-3..=0.999f64) {
        let cfg = EmaConfig::default();
        let back = ema::share_from_cti(ema::cti_from_share(p, &cfg).unwrap(), &cfg).unwrap();
        prop_assert!((back - p).abs() <= 1e-9);
    }

    #[test]
    fn classification_consistent(cti in 0.0..=10.0f64) {
        let region = ema::classify(cti).unwrap();
        let (lo, hi) = region.cti_range();
        prop_assert!(cti >= lo && (cti < hi || (hi == 10.0 && cti == 10.0)));
    }

    #[test]
    fn log_odds_round_trip(p in 1e-12..(1.0 - 1e-12)) {
        let y = share::log_odds(p).unwrap();
        let back = share::share_from_log_odds(y);
        prop_assert!((back - p).abs() <= 1e-12 * p.max(1e-3));
    }

    #[test]
    fn slope_is_negative_log_odds_derivative(params in trial_params(), t in 0.0..200.0f64) {
        let h = 1e-4;
        let fd = (share::y_trial(t + h, &params) - share::y_trial(t - h, &params)) / (2.0 * h);
        let a2 = share::slope_a2(t, &params);
        prop_assert!((a2 + fd).abs() <= 1e-6 * (1.0 + a2.abs()), "{a2} vs {fd}");
    }

    #[test]
    fn modulation_identity(params in trial_params(), t in 0.0..500.0f64) {
        let y = share::y_trial(t, &params);
        let m = share::modulation_factor(t, &params) * share::asymptote_linear(&params, t);
        prop_assert!((y - m).abs() <= 1e-12 * y.abs().max(1.0));
    }

    #[test]
    fn quadratic_matching_round_trip(params in trial_params()) {
        let ShareCurveParams { alpha, beta, gamma, period, .. } = params;
        let s = share::match_from_quadratic(2.0 * alpha / period, beta / period - alpha * gamma, beta * gamma, period).unwrap();
        for (got, want) in [(s.alpha, alpha), (s.beta, beta), (s.gamma, gamma)] {
            prop_assert!((got - want).abs() <= 1e-9 * want);
        }
    }

    #[test]
    fn linear_matching_round_trip(params in trial_params()) {
        let ShareCurveParams { alpha, beta, gamma, .. } = params;
        let s = share::match_from_linear(alpha * (1.0 - gamma), (gamma - 1.0) * beta, gamma).unwrap();
        prop_assert!((s.alpha - alpha).abs() <= 1e-12 * alpha);
        prop_assert!((s.beta - beta).abs() <= 1e-12 * beta);
    }

    #[test]
    fn nested_fit_r_squared(ys in prop::collection::vec(-5.0..5.0f64, 6..25)) {
        let ts: Vec<f64> = (0..ys.len()).map(|k| k as f64).collect();
        let lin = ols::fit_polynomial(&ts, &ys, 1).unwrap();
        let quad = ols::fit_polynomial(&ts, &ys, 2).unwrap();
        prop_assert!(quad.r_squared >= lin.r_squared - 1e-12);
        for (j, col) in [0, 1, 2].iter().enumerate() {
            let dot: f64 = ts.iter().zip(&quad.residuals).map(|(t, r)| t.powi(*col) * r).sum();
            prop_assert!(dot.abs() <= 1e-9 * (1.0 + 20f64.powi(j as i32 + 1)), "column {j}: {dot}");
        }
    }

    #[test]
    fn rate_chain_rule(params in trial_params(), t in 0.0..150.0f64) {
        let cfg = EmaConfig::default();
        let p = share::share_at(t, &params);
        prop_assume!(p > 0.0 && p < 1.0);
        let q = share::share_from_log_odds(-share::y_trial(t, &params));
        let product = rate::dsigma_dp(p, &cfg).unwrap() * share::slope_a2(t, &params) * p * q;
        let direct = rate::dsigma_dt(t, &params, &cfg);
        prop_assert!((direct - product).abs() <= 1e-9 * product.abs().max(1e-300));
    }

    #[test]
    fn alpha_prime_bounds(alpha in 0.01..1.0f64, evs in events(), t in -1e3..1e3f64, dt in 0.0..50.0f64) {
        let a = policy::alpha_prime(t, alpha, &evs);
        let total: f64 = evs.iter().map(|e| e.epsilon).sum();
        prop_assert!(a >= alpha && a <= alpha + 2.0 * total);
        if total > 0.0 {
            prop_assert!(a < alpha + 2.0 * total);
        }
        prop_assert!(policy::alpha_prime(t + dt, alpha, &evs) >= a);
    }

    #[test]
    fn policy_monotone_past_crossover(params in trial_params(), eps in 0.0..0.3f64, extra in 0.0..0.3f64, t_i in 0.0..30.0f64, dt in 0.01..60.0f64) {
        let cfg = EmaConfig::default();
        let t = share::half_share_time(&params).unwrap() + dt;
        let sc = |e: f64| Scenario::new("s", params, vec![PolicyEvent::new(e, t_i, 10.0).unwrap()]).unwrap();
        let lo = policy::project_policy(t, &sc(eps), &cfg).unwrap();
        let hi = policy::project_policy(t, &sc(eps + extra), &cfg).unwrap();
        prop_assert!(hi.y <= lo.y);
        prop_assert!(hi.share >= lo.share && hi.cti >= lo.cti);
    }

    #[test]
    fn params_document_round_trip(params in trial_params()) {
        let doc = data::save_params(&params).unwrap();
        let back = data::load_params(&doc).unwrap();
        prop_assert_eq!(back, params);
        for field in [back.alpha, back.beta, back.gamma, back.period, back.delta_t0]
            .iter()
            .zip([params.alpha, params.beta, params.gamma, params.period, params.delta_t0])
        {
            prop_assert_eq!(field.0.to_bits(), field.1.to_bits());
        }
    }

    #[test]
    fn scenario_document_round_trip(params in trial_params(), evs in events(), label in "[a-zA-Z0-9 _=.-]{1,16}") {
        let sc = Scenario::new(label, params, evs).unwrap();
        prop_assert_eq!(data::load_scenario(&data::save_scenario(&sc).unwrap()).unwrap(), sc);
    }

    #[test]
    fn config_document_round_trip(sc in 0.1..5.0f64, ratio in 1.5..100.0f64, z in 2.5..10.0f64, g in 0.05..0.95f64, percent in any::<bool>()) {
        let cfg = RunConfig {
            sigma_cash: sc,
            sigma_cashless: sc * ratio,
            z,
            period: 50.0,
            gamma_default: g,
            share_unit: if percent { ShareUnit::Percent } else { ShareUnit::Fraction },
        };
        prop_assert_eq!(RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn report_document_round_trip(params in trial_params(), n in 4usize..25) {
        let pairs: Vec<(i32, f64)> = (0..n as i32)
            .map(|k| (1990 + k, share::share_at(f64::from(k), &params)))
            .collect();
        let series = CountrySeries::from_pairs("Somewhere", &pairs).unwrap();
        let Ok(report) = calibration::calibrate_country(&series, &CalibrationOptions::default()) else {
            return Ok(());
        };
        let back = data::load_report(&data::save_report(&report).unwrap()).unwrap();
        prop_assert_eq!(back, report);
    }
}
