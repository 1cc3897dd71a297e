//! Noisy-fit oracle: recovered coefficients scatter around the truth at the
//! width predicted by `sigma^2 (X^T X)^-1`.

use cashless_cti::calibration;
use cashless_cti::share::{self, ModelKind};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const NOISE: f64 = 0.05;
const SEEDS: u64 = 100;

/// Standard errors of OLS coefficients for a known noise level.
fn standard_errors(ts: &[f64], degree: usize) -> Vec<f64> {
    let x = DMatrix::from_fn(ts.len(), degree + 1, |i, j| ts[i].powi(j as i32));
    let cov = (x.transpose() * &x)
        .try_inverse()
        .expect("full-rank design");
    (0..=degree).map(|j| NOISE * cov[(j, j)].sqrt()).collect()
}

fn run(model: ModelKind, truth: [f64; 3]) -> (usize, Vec<f64>) {
    let ts: Vec<f64> = (0..21).map(f64::from).collect();
    let degree = if model == ModelKind::Linear { 1 } else { 2 };
    let se = standard_errors(&ts, degree);
    let normal = Normal::new(0.0, NOISE).unwrap();
    let mut outside = 0;
    let mut z_sum = vec![0.0; degree + 1];
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let y = truth[0] + truth[1] * t + truth[2] * t * t + normal.sample(&mut rng);
                (t, share::share_from_log_odds(y))
            })
            .collect();
        let fit = calibration::fit_points(&points, model, 2000).unwrap();
        let got = fit.coefficients();
        for j in 0..=degree {
            let z = (got[j] - truth[j]) / se[j];
            z_sum[j] += z;
            if z.abs() > 3.0 {
                outside += 1;
            }
        }
    }
    (outside, z_sum.iter().map(|s| s / SEEDS as f64).collect())
}

fn check(model: ModelKind, truth: [f64; 3]) {
    let (outside, mean_z) = run(model, truth);
    // P(|z| > 3) = 0.0027 per coefficient; more than 5 exceedances in at most
    // 300 draws has probability below 1e-3.
    assert!(
        outside <= 5,
        "{outside} coefficients beyond 3 standard errors"
    );
    // The mean of 100 unit normals has standard deviation 0.1.
    for m in mean_z {
        assert!(m.abs() < 0.4, "biased estimate: mean z = {m}");
    }
}

#[test]
fn quadratic_coefficients_within_three_standard_errors() {
    check(ModelKind::Quadratic, [1.388706, -0.00644, -0.0032]);
}

#[test]
fn linear_coefficients_within_three_standard_errors() {
    check(ModelKind::Linear, [1.0, -0.1, 0.0]);
}
