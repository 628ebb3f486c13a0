//! Day-ahead consumption forecasting: five classical baselines, the
//! lightweight surrogate, empirical quantile bands, and accuracy metrics.

pub mod bands;
pub mod baselines;
pub mod eval;
pub mod metrics;

pub use bands::{empirical_quantile, fit_quantile_bands, QuantileForecast, QUANTILES};
pub use baselines::{BaselineKind, ForecastKnobs};
pub use eval::{
    customer_quantiles, evaluate_method, evaluate_methods, fit_offsets_on_train,
    forecast_all, ForecastSet, MethodEvaluation, FORECAST_START_DAY,
};
pub use metrics::{mape, rmse, ForecastMetrics};

use crate::error::{Error, Result};

/// Input window length in hours: 7 days of hourly readings.
pub const WINDOW_HOURS: usize = 168;
/// Forecast horizon in hours.
pub const HORIZON_HOURS: usize = 24;

/// Quantile (pinball) loss rho_q(actual - predicted) = max(q*e, (q-1)*e).
pub fn pinball_loss(actual: f64, predicted: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) || q == 0.0 || q == 1.0 {
        return Err(Error::Domain(format!("quantile must be in (0,1), got {q}")));
    }
    let e = actual - predicted;
    Ok((q * e).max((q - 1.0) * e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinball_unit_cases() {
        assert_eq!(pinball_loss(2.0, 1.0, 0.5).unwrap(), 0.5);
        assert!((pinball_loss(1.0, 2.0, 0.9).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(pinball_loss(3.25, 3.25, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn pinball_rejects_degenerate_quantiles() {
        assert!(pinball_loss(1.0, 1.0, 0.0).is_err());
        assert!(pinball_loss(1.0, 1.0, 1.0).is_err());
        assert!(pinball_loss(1.0, 1.0, -0.3).is_err());
    }
}
