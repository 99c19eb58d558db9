//! Ordinary least-squares straight-line fits.

use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub intercept: f64,
    pub slope: f64,
    pub stderr_intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Fits `y = intercept + slope·x`; standard errors come from the residual
/// variance with `n - 2` degrees of freedom.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(IsingError::DegenerateFit(
            "at least three points are required",
        ));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(IsingError::DegenerateFit("non-finite data"));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx <= f64::EPSILON * points.iter().map(|p| p.0 * p.0).sum::<f64>() {
        return Err(IsingError::DegenerateFit("x values are not distinct"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let sigma2 = ss_res / (n - 2.0);
    let stderr_slope = (sigma2 / sxx).sqrt();
    let stderr_intercept = (sigma2 * (1.0 / n + mean_x * mean_x / sxx)).sqrt();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(FitResult {
        intercept,
        slope,
        stderr_intercept,
        stderr_slope,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let pts: Vec<_> = (0..5).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        let fit = linear_fit(&pts).unwrap();
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!(fit.stderr_slope < 1e-12 && fit.stderr_intercept < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn known_residuals() {
        // y = x with residuals +1, -2, +1 about the fitted line y = x
        let fit = linear_fit(&[(0.0, 1.0), (1.0, -1.0), (2.0, 3.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-14);
        assert!((fit.intercept - 0.0).abs() < 1e-14);
        // σ² = 6/1, Sxx = 2
        assert!((fit.stderr_slope - 3f64.sqrt()).abs() < 1e-12);
        assert!((fit.stderr_intercept - (6.0f64 * (1.0 / 3.0 + 0.5)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(linear_fit(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(linear_fit(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(linear_fit(&[(0.0, 1.0), (1.0, f64::NAN), (2.0, 3.0)]).is_err());
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(ys in proptest::collection::vec(-10.0f64..10.0, 3..20)) {
            let pts: Vec<_> = ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
            let fit = linear_fit(&pts).unwrap();
            prop_assert!((0.0..=1.0).contains(&fit.r_squared));
        }
    }
}
