//! Point-forecast baselines and the lightweight surrogate.
//!
//! All forecasters consume a chronological hourly history (whole days, day 0
//! first) and emit the next day's 24 hourly point values. Fitted kinds carry
//! state estimated on the training split only.

use serde::{Deserialize, Serialize};

use super::{HORIZON_HOURS, WINDOW_HOURS};
use crate::error::{Error, Result};

const H: usize = HORIZON_HOURS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineKind {
    Persist,
    Sma,
    Hwes,
    LinReg,
    ArResidual,
    Surrogate,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 6] = [
        BaselineKind::Persist,
        BaselineKind::Sma,
        BaselineKind::Hwes,
        BaselineKind::LinReg,
        BaselineKind::ArResidual,
        BaselineKind::Surrogate,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BaselineKind::Persist => "persist",
            BaselineKind::Sma => "sma",
            BaselineKind::Hwes => "hwes",
            BaselineKind::LinReg => "linreg",
            BaselineKind::ArResidual => "ar_residual",
            BaselineKind::Surrogate => "surrogate",
        }
    }
}

/// Tunable forecasting constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastKnobs {
    pub hwes_alpha: f64,
    pub hwes_beta: f64,
    pub hwes_gamma: f64,
    /// Decay of the surrogate's per-hour bias state.
    pub lambda_b: f64,
    pub ar_order: usize,
    pub epsilon_mape: f64,
}

impl Default for ForecastKnobs {
    fn default() -> Self {
        Self {
            hwes_alpha: 0.2,
            hwes_beta: 0.02,
            hwes_gamma: 0.1,
            lambda_b: 0.6,
            ar_order: 4,
            epsilon_mape: 1e-6,
        }
    }
}

fn require_window(history: &[f64]) -> Result<()> {
    if history.len() < WINDOW_HOURS {
        return Err(Error::Precondition(format!(
            "history must cover at least {WINDOW_HOURS} hours, got {}",
            history.len()
        )));
    }
    if history.len() % H != 0 {
        return Err(Error::Precondition("history must cover whole days".into()));
    }
    Ok(())
}

/// Yesterday's same-hour values.
pub fn persist_forecast(history: &[f64]) -> Result<[f64; H]> {
    require_window(history)?;
    let mut out = [0.0; H];
    out.copy_from_slice(&history[history.len() - H..]);
    Ok(out)
}

/// Mean of the last seven same-hour values.
pub fn sma_forecast(history: &[f64]) -> Result<[f64; H]> {
    require_window(history)?;
    let n = history.len();
    let mut out = [0.0; H];
    for (h, slot) in out.iter_mut().enumerate() {
        *slot = (1..=7).map(|d| history[n - d * H + h]).sum::<f64>() / 7.0;
    }
    Ok(out)
}

/// Additive Holt-Winters with period 24, initialised from the first seven
/// days of the history (level = mean, trend = 0, seasonals = per-hour mean
/// deviations), then updated hourly through the remaining history.
pub fn hwes_forecast(history: &[f64], knobs: &ForecastKnobs) -> Result<[f64; H]> {
    require_window(history)?;
    let (alpha, beta, gamma) = (knobs.hwes_alpha, knobs.hwes_beta, knobs.hwes_gamma);
    let init = &history[..WINDOW_HOURS];
    let mut level = init.iter().sum::<f64>() / init.len() as f64;
    let mut trend = 0.0;
    let mut seasonal = [0.0; H];
    for (h, slot) in seasonal.iter_mut().enumerate() {
        *slot = (0..7).map(|d| init[d * H + h] - level).sum::<f64>() / 7.0;
    }
    for (t, &y) in history.iter().enumerate().skip(WINDOW_HOURS) {
        let h = t % H;
        let prev_level = level;
        level = alpha * (y - seasonal[h]) + (1.0 - alpha) * (level + trend);
        trend = beta * (level - prev_level) + (1.0 - beta) * trend;
        seasonal[h] = gamma * (y - level) + (1.0 - gamma) * seasonal[h];
    }
    let mut out = [0.0; H];
    for (h, slot) in out.iter_mut().enumerate() {
        *slot = (level + (h + 1) as f64 * trend + seasonal[h]).max(0.0);
    }
    Ok(out)
}

/// Per-(hour-of-day, weekday/weekend) mean over the training days. Used both
/// as the AR de-seasoning reference and as the OLS fallback forecast.
#[derive(Debug, Clone)]
pub struct SeasonalMeans {
    /// [weekday, weekend] x hour-of-day.
    means: [[f64; H]; 2],
}

fn dow_class(day: usize) -> usize {
    usize::from(matches!(day % 7, 5 | 6))
}

impl SeasonalMeans {
    pub fn fit(hourly: &[f64], train_days: usize) -> Self {
        let mut sums = [[0.0; H]; 2];
        let mut counts = [[0usize; H]; 2];
        for day in 0..train_days {
            let class = dow_class(day);
            for h in 0..H {
                sums[class][h] += hourly[day * H + h];
                counts[class][h] += 1;
            }
        }
        let mut means = [[0.0; H]; 2];
        for class in 0..2 {
            for h in 0..H {
                means[class][h] = if counts[class][h] > 0 {
                    sums[class][h] / counts[class][h] as f64
                } else {
                    0.0
                };
            }
        }
        Self { means }
    }

    pub fn value(&self, day: usize, hour: usize) -> f64 {
        self.means[dow_class(day)][hour]
    }
}

/// Ordinary least squares on calendar one-hots (hour-of-day, day-of-week)
/// plus a yesterday-same-hour anchor regressor.
#[derive(Debug, Clone)]
pub struct LinRegModel {
    /// 24 hour coefficients, 6 day-of-week offsets (Tuesday..Sunday), anchor.
    coef: Option<Vec<f64>>,
    fallback: SeasonalMeans,
    pub used_fallback: bool,
}

const LR_FEATURES: usize = H + 6 + 1;

fn linreg_row(day: usize, hour: usize, anchor: f64) -> [f64; LR_FEATURES] {
    let mut row = [0.0; LR_FEATURES];
    row[hour] = 1.0;
    let dow = day % 7;
    if dow >= 1 {
        row[H + dow - 1] = 1.0;
    }
    row[H + 6] = anchor;
    row
}

impl LinRegModel {
    pub fn fit(hourly: &[f64], train_days: usize) -> Result<Self> {
        if train_days < 8 {
            return Err(Error::Precondition("need at least 8 training days".into()));
        }
        let fallback = SeasonalMeans::fit(hourly, train_days);
        let mut xtx = vec![vec![0.0_f64; LR_FEATURES]; LR_FEATURES];
        let mut xty = vec![0.0_f64; LR_FEATURES];
        for day in 1..train_days {
            for h in 0..H {
                let anchor = hourly[(day - 1) * H + h];
                let row = linreg_row(day, h, anchor);
                let y = hourly[day * H + h];
                for i in 0..LR_FEATURES {
                    if row[i] == 0.0 {
                        continue;
                    }
                    xty[i] += row[i] * y;
                    for j in 0..LR_FEATURES {
                        xtx[i][j] += row[i] * row[j];
                    }
                }
            }
        }
        match solve_linear(&mut xtx, &mut xty) {
            Some(coef) => Ok(Self { coef: Some(coef), fallback, used_fallback: false }),
            None => Ok(Self { coef: None, fallback, used_fallback: true }),
        }
    }

    pub fn forecast(&self, history: &[f64], day: usize) -> Result<[f64; H]> {
        require_window(history)?;
        let n = history.len();
        let mut out = [0.0; H];
        match &self.coef {
            Some(coef) => {
                for (h, slot) in out.iter_mut().enumerate() {
                    let row = linreg_row(day, h, history[n - H + h]);
                    *slot = row
                        .iter()
                        .zip(coef)
                        .map(|(x, c)| x * c)
                        .sum::<f64>()
                        .max(0.0);
                }
            }
            None => {
                for (h, slot) in out.iter_mut().enumerate() {
                    *slot = self.fallback.value(day, h);
                }
            }
        }
        Ok(out)
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = (0..n)
        .map(|i| a[i][i].abs())
        .fold(1.0_f64, f64::max);
    let tol = 1e-10 * scale;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot_row][col].abs() < tol {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// AR(p) by least squares on de-seasoned hourly residuals.
#[derive(Debug, Clone)]
pub struct ArResidualModel {
    pub seasonal: SeasonalMeans,
    pub coeffs: Vec<f64>,
}

impl ArResidualModel {
    pub fn fit(hourly: &[f64], train_days: usize, order: usize) -> Result<Self> {
        if order == 0 || train_days * H <= order + 1 {
            return Err(Error::Precondition("insufficient data for AR fit".into()));
        }
        let seasonal = SeasonalMeans::fit(hourly, train_days);
        let residuals: Vec<f64> = (0..train_days * H)
            .map(|t| hourly[t] - seasonal.value(t / H, t % H))
            .collect();
        let coeffs = fit_ar(&residuals, order);
        Ok(Self { seasonal, coeffs })
    }

    pub fn forecast(&self, history: &[f64], day: usize) -> Result<[f64; H]> {
        require_window(history)?;
        let order = self.coeffs.len();
        let n = history.len();
        // Residuals of the most recent observed hours, oldest first.
        let mut lags: Vec<f64> = (n - order..n)
            .map(|t| history[t] - self.seasonal.value(t / H, t % H))
            .collect();
        let mut out = [0.0; H];
        for (h, slot) in out.iter_mut().enumerate() {
            let r: f64 = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * lags[order - 1 - k])
                .sum();
            lags.remove(0);
            lags.push(r);
            *slot = (self.seasonal.value(day, h) + r).max(0.0);
        }
        Ok(out)
    }
}

/// Least-squares AR(p) coefficients (lag 1 first), zero vector if the normal
/// equations are singular.
pub fn fit_ar(series: &[f64], order: usize) -> Vec<f64> {
    let n = series.len();
    let mut xtx = vec![vec![0.0_f64; order]; order];
    let mut xty = vec![0.0_f64; order];
    for t in order..n {
        for i in 0..order {
            xty[i] += series[t - 1 - i] * series[t];
            for j in 0..order {
                xtx[i][j] += series[t - 1 - i] * series[t - 1 - j];
            }
        }
    }
    solve_linear(&mut xtx, &mut xty).unwrap_or_else(|| vec![0.0; order])
}

/// The lightweight surrogate's per-hour exponentially-weighted bias state.
#[derive(Debug, Clone)]
pub struct SurrogateState {
    pub bias: [f64; H],
    pub lambda: f64,
}

impl SurrogateState {
    pub fn new(lambda: f64) -> Self {
        Self { bias: [0.0; H], lambda }
    }

    /// Daily update with the realised bias of the day's SMA forecast.
    pub fn update(&mut self, actual: &[f64], sma: &[f64; H]) {
        for h in 0..H {
            self.bias[h] =
                self.lambda * self.bias[h] + (1.0 - self.lambda) * (actual[h] - sma[h]);
        }
    }

    pub fn forecast(&self, history: &[f64]) -> Result<[f64; H]> {
        let sma = sma_forecast(history)?;
        let mut out = [0.0; H];
        for (h, slot) in out.iter_mut().enumerate() {
            *slot = (sma[h] + self.bias[h]).max(0.0);
        }
        Ok(out)
    }
}
