//! Day-by-day forecast evaluation over the corpus: one forecast per test day
//! per customer, aggregated by summation for the headline metrics.

use serde::{Deserialize, Serialize};

use super::bands::{fit_quantile_bands, QuantileForecast, QuantileOffsets, QUANTILES};
use super::baselines::{
    hwes_forecast, persist_forecast, sma_forecast, ArResidualModel, BaselineKind,
    ForecastKnobs, LinRegModel, SurrogateState,
};
use super::metrics::{mape, rmse, ForecastMetrics};
use super::{pinball_loss, HORIZON_HOURS};
use crate::error::{Error, Result};

const H: usize = HORIZON_HOURS;

/// First day with a full 7-day window plus one anchor day behind it.
pub const FORECAST_START_DAY: usize = 8;

/// Point forecasts for days `[start_day, n_days)`, one 24-hour block per
/// customer per day.
#[derive(Debug, Clone)]
pub struct ForecastSet {
    pub kind: BaselineKind,
    pub start_day: usize,
    pub n_days: usize,
    /// Per customer, `(n_days - start_day) * 24` values.
    pub points: Vec<Vec<f64>>,
    pub used_fallback: bool,
}

impl ForecastSet {
    pub fn day_slice(&self, customer: usize, day: usize) -> &[f64] {
        let offset = (day - self.start_day) * H;
        &self.points[customer][offset..offset + H]
    }

    /// Sum over customers: one value per (day, hour) from `start_day` on.
    pub fn aggregate(&self) -> Vec<f64> {
        let len = (self.n_days - self.start_day) * H;
        let mut agg = vec![0.0; len];
        for series in &self.points {
            for (i, v) in series.iter().enumerate() {
                agg[i] += v;
            }
        }
        agg
    }
}

fn forecast_one_customer(
    hourly: &[f64],
    n_days: usize,
    train_days: usize,
    kind: BaselineKind,
    knobs: &ForecastKnobs,
) -> Result<(Vec<f64>, bool)> {
    let mut out = Vec::with_capacity((n_days - FORECAST_START_DAY) * H);
    let mut used_fallback = false;
    match kind {
        BaselineKind::Persist => {
            for day in FORECAST_START_DAY..n_days {
                out.extend_from_slice(&persist_forecast(&hourly[..day * H])?);
            }
        }
        BaselineKind::Sma => {
            for day in FORECAST_START_DAY..n_days {
                out.extend_from_slice(&sma_forecast(&hourly[..day * H])?);
            }
        }
        BaselineKind::Hwes => {
            for day in FORECAST_START_DAY..n_days {
                out.extend_from_slice(&hwes_forecast(&hourly[..day * H], knobs)?);
            }
        }
        BaselineKind::LinReg => {
            let model = LinRegModel::fit(hourly, train_days)?;
            used_fallback = model.used_fallback;
            for day in FORECAST_START_DAY..n_days {
                out.extend_from_slice(&model.forecast(&hourly[..day * H], day)?);
            }
        }
        BaselineKind::ArResidual => {
            let model = ArResidualModel::fit(hourly, train_days, knobs.ar_order)?;
            for day in FORECAST_START_DAY..n_days {
                out.extend_from_slice(&model.forecast(&hourly[..day * H], day)?);
            }
        }
        BaselineKind::Surrogate => {
            let mut state = SurrogateState::new(knobs.lambda_b);
            for day in FORECAST_START_DAY..n_days {
                let history = &hourly[..day * H];
                out.extend_from_slice(&state.forecast(history)?);
                // Close of day d: fold the realised bias into the state.
                let sma = sma_forecast(history)?;
                state.update(&hourly[day * H..(day + 1) * H], &sma);
            }
        }
    }
    Ok((out, used_fallback))
}

/// Run one method over every customer.
pub fn forecast_all(
    hourly_per_customer: &[Vec<f64>],
    n_days: usize,
    train_days: usize,
    kind: BaselineKind,
    knobs: &ForecastKnobs,
) -> Result<ForecastSet> {
    if train_days <= FORECAST_START_DAY + 14 {
        return Err(Error::Precondition(
            "training split too short for band fitting".into(),
        ));
    }
    let mut points = Vec::with_capacity(hourly_per_customer.len());
    let mut used_fallback = false;
    for hourly in hourly_per_customer {
        let (series, fb) = forecast_one_customer(hourly, n_days, train_days, kind, knobs)?;
        used_fallback |= fb;
        points.push(series);
    }
    Ok(ForecastSet { kind, start_day: FORECAST_START_DAY, n_days, points, used_fallback })
}

/// Quantile offsets fitted on the training-day residuals of a forecast
/// series (indexed from `start_day`).
pub fn fit_offsets_on_train(
    actual_hourly: &[f64],
    points: &[f64],
    start_day: usize,
    train_days: usize,
) -> Result<QuantileOffsets> {
    let mut residuals: [Vec<f64>; H] = std::array::from_fn(|_| Vec::new());
    for day in start_day..train_days {
        for h in 0..H {
            let actual = actual_hourly[day * H + h];
            let point = points[(day - start_day) * H + h];
            residuals[h].push(actual - point);
        }
    }
    fit_quantile_bands(&residuals)
}

/// Per-customer quantile forecasts for every test day.
pub fn customer_quantiles(
    set: &ForecastSet,
    hourly_per_customer: &[Vec<f64>],
    train_days: usize,
) -> Result<Vec<Vec<QuantileForecast>>> {
    let mut all = Vec::with_capacity(set.points.len());
    for (c, hourly) in hourly_per_customer.iter().enumerate() {
        let offsets =
            fit_offsets_on_train(hourly, &set.points[c], set.start_day, train_days)?;
        let mut per_day = Vec::with_capacity(set.n_days - train_days);
        for day in train_days..set.n_days {
            let mut point = [0.0; H];
            point.copy_from_slice(set.day_slice(c, day));
            per_day.push(offsets.apply(&point));
        }
        all.push(per_day);
    }
    Ok(all)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodEvaluation {
    pub kind: BaselineKind,
    pub metrics: ForecastMetrics,
    /// Fraction of aggregate test actuals inside [q10, q90].
    pub coverage: f64,
    pub used_fallback: bool,
}

/// Evaluate one method on the aggregate signal: MAPE/RMSE on points, pinball
/// and coverage on aggregate-level quantile bands.
pub fn evaluate_method(
    set: &ForecastSet,
    aggregate_actual: &[f64],
    train_days: usize,
    knobs: &ForecastKnobs,
) -> Result<MethodEvaluation> {
    let agg_points = set.aggregate();
    let offsets =
        fit_offsets_on_train(aggregate_actual, &agg_points, set.start_day, train_days)?;

    let test_hours = (set.n_days - train_days) * H;
    let mut actual_test = Vec::with_capacity(test_hours);
    let mut point_test = Vec::with_capacity(test_hours);
    let mut pinball_sum = 0.0;
    let mut covered = 0usize;
    for day in train_days..set.n_days {
        let mut point = [0.0; H];
        point.copy_from_slice(&agg_points[(day - set.start_day) * H..][..H]);
        let bands = offsets.apply(&point);
        for h in 0..H {
            let actual = aggregate_actual[day * H + h];
            actual_test.push(actual);
            point_test.push(point[h]);
            let preds = [bands.q10[h], bands.q50[h], bands.q90[h]];
            for (qi, &q) in QUANTILES.iter().enumerate() {
                pinball_sum += pinball_loss(actual, preds[qi], q)?;
            }
            if actual >= bands.q10[h] && actual <= bands.q90[h] {
                covered += 1;
            }
        }
    }
    let (mape_pct, mape_excluded) = mape(&actual_test, &point_test, knobs.epsilon_mape)?;
    let rmse_kwh = rmse(&actual_test, &point_test)?;
    let pinball = pinball_sum / (test_hours * QUANTILES.len()) as f64;
    Ok(MethodEvaluation {
        kind: set.kind,
        metrics: ForecastMetrics { mape_pct, rmse_kwh, pinball, mape_excluded },
        coverage: covered as f64 / test_hours as f64,
        used_fallback: set.used_fallback,
    })
}

/// Run and evaluate every method.
pub fn evaluate_methods(
    hourly_per_customer: &[Vec<f64>],
    n_days: usize,
    train_days: usize,
    knobs: &ForecastKnobs,
) -> Result<Vec<MethodEvaluation>> {
    let mut aggregate_actual = vec![0.0; n_days * H];
    for hourly in hourly_per_customer {
        for (i, v) in hourly.iter().enumerate() {
            aggregate_actual[i] += v;
        }
    }
    BaselineKind::ALL
        .iter()
        .map(|&kind| {
            let set = forecast_all(hourly_per_customer, n_days, train_days, kind, knobs)?;
            evaluate_method(&set, &aggregate_actual, train_days, knobs)
        })
        .collect()
}
