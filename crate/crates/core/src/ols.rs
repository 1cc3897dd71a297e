//! Ordinary least squares on a polynomial basis `{1, t, ..., t^degree}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest mark a rank-deficient design.
const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    /// Ascending coefficients: `y = c[0] + c[1] t + ...`.
    pub coefficients: Vec<f64>,
    /// Plain coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

impl PolyFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c)
    }
}

pub(crate) fn design_matrix(ts: &[f64], degree: usize) -> DMatrix<f64> {
    DMatrix::from_fn(ts.len(), degree + 1, |i, j| ts[i].powi(j as i32))
}

/// Least-squares polynomial fit of `ys` against `ts`.
///
/// Requires more observations than coefficients, so that R² is informative.
pub fn fit_polynomial(ts: &[f64], ys: &[f64], degree: usize) -> Result<PolyFit> {
    assert_eq!(ts.len(), ys.len(), "abscissa and ordinate lengths differ");
    let needed = degree + 2;
    if ts.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: ts.len(),
        });
    }
    if ts.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::domain(
            "least-squares input contains non-finite values",
        ));
    }

    let x = design_matrix(ts, degree);
    let y = DVector::from_column_slice(ys);
    let svd = x.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    if !(max_sv > 0.0) || min_sv <= RANK_TOLERANCE * max_sv {
        return Err(Error::SingularDesign);
    }
    let beta = svd
        .solve(&y, RANK_TOLERANCE * max_sv)
        .map_err(|_| Error::SingularDesign)?;

    let fitted = &x * &beta;
    let residuals: Vec<f64> = y.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(PolyFit {
        coefficients: beta.iter().copied().collect(),
        r_squared,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let ts = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = ts.iter().map(|t| 1.0 - 0.1 * t).collect();
        let fit = fit_polynomial(&ts, &ys, 1).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-14);
        assert!((fit.coefficients[1] + 0.1).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
        assert!((fit.eval(10.0)).abs() < 1e-13);
    }

    #[test]
    fn residuals_orthogonal_to_design() {
        let ts: Vec<f64> = (0..12).map(f64::from).collect();
        let ys: Vec<f64> = ts.iter().map(|t| (0.3 * t).sin() + 0.01 * t * t).collect();
        let fit = fit_polynomial(&ts, &ys, 2).unwrap();
        let x = design_matrix(&ts, 2);
        for j in 0..3 {
            let dot: f64 = (0..ts.len()).map(|i| x[(i, j)] * fit.residuals[i]).sum();
            assert!(dot.abs() < 1e-9, "column {j}: {dot}");
        }
    }

    #[test]
    fn repeated_abscissa_is_singular() {
        let ts = [2.0, 2.0, 2.0, 2.0];
        let ys = [0.1, 0.2, 0.3, 0.4];
        assert!(matches!(
            fit_polynomial(&ts, &ys, 1),
            Err(Error::SingularDesign)
        ));
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            fit_polynomial(&[0.0, 1.0, 2.0], &[1.0, 2.0, 3.0], 2),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
    }
}
