//! Forecast accuracy metrics on the aggregate hourly signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ForecastMetrics {
    pub mape_pct: f64,
    pub rmse_kwh: f64,
    pub pinball: f64,
    /// Actuals below epsilon excluded from the MAPE mean.
    pub mape_excluded: usize,
}

/// MAPE in percent; actuals with |a| < epsilon are excluded and counted.
pub fn mape(actuals: &[f64], forecasts: &[f64], epsilon: f64) -> Result<(f64, usize)> {
    if actuals.len() != forecasts.len() || actuals.is_empty() {
        return Err(Error::Domain("mape needs equal, non-empty inputs".into()));
    }
    let mut sum = 0.0;
    let mut used = 0usize;
    for (a, f) in actuals.iter().zip(forecasts) {
        if a.abs() < epsilon {
            continue;
        }
        sum += ((a - f) / a).abs();
        used += 1;
    }
    if used == 0 {
        return Err(Error::Domain("every actual fell below the MAPE epsilon".into()));
    }
    Ok((100.0 * sum / used as f64, actuals.len() - used))
}

pub fn rmse(actuals: &[f64], forecasts: &[f64]) -> Result<f64> {
    if actuals.len() != forecasts.len() || actuals.is_empty() {
        return Err(Error::Domain("rmse needs equal, non-empty inputs".into()));
    }
    let sq: f64 = actuals
        .iter()
        .zip(forecasts)
        .map(|(a, f)| (a - f) * (a - f))
        .sum();
    Ok((sq / actuals.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_forecast_scores_zero() {
        let a = [3.0, 4.0, 5.0];
        assert_eq!(mape(&a, &a, 1e-6).unwrap().0, 0.0);
        assert_eq!(rmse(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn direct_arithmetic_case() {
        let actuals = [100.0, 100.0];
        let forecasts = [90.0, 110.0];
        let (m, excluded) = mape(&actuals, &forecasts, 1e-6).unwrap();
        assert!((m - 10.0).abs() < 1e-12);
        assert_eq!(excluded, 0);
        assert!((rmse(&actuals, &forecasts).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn near_zero_actuals_are_excluded_and_counted() {
        let actuals = [0.0, 100.0];
        let forecasts = [5.0, 110.0];
        let (m, excluded) = mape(&actuals, &forecasts, 1e-6).unwrap();
        assert!((m - 10.0).abs() < 1e-12);
        assert_eq!(excluded, 1);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(mape(&[1.0], &[1.0, 2.0], 1e-6).is_err());
        assert!(rmse(&[], &[]).is_err());
    }
}
