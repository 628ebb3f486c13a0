//! Empirical quantile bands around point forecasts.
//!
//! The per-hour offset is the empirical q-quantile of the training residuals
//! (actual minus point forecast), which is the exact minimiser of the sample
//! pinball loss. Bands are monotone-rearranged per hour.

use serde::{Deserialize, Serialize};

use super::HORIZON_HOURS;
use crate::error::{Error, Result};

pub const QUANTILES: [f64; 3] = [0.1, 0.5, 0.9];

const H: usize = HORIZON_HOURS;
const MIN_SAMPLES_PER_HOUR: usize = 14;

/// Day-ahead forecast at quantiles {0.1, 0.5, 0.9}; monotone per hour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileForecast {
    pub q10: [f64; H],
    pub q50: [f64; H],
    pub q90: [f64; H],
}

/// Empirical q-quantile of a sample: the lowest order statistic minimising
/// the sample pinball loss.
pub fn empirical_quantile(sample: &[f64], q: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Precondition("empty quantile sample".into()));
    }
    if q <= 0.0 || q >= 1.0 {
        return Err(Error::Domain(format!("quantile must be in (0,1), got {q}")));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let idx = ((q * n).ceil() as usize).clamp(1, sorted.len()) - 1;
    Ok(sorted[idx])
}

/// Per-hour quantile offsets fitted on point-forecast residuals.
#[derive(Debug, Clone)]
pub struct QuantileOffsets {
    /// Offsets per quantile (ordered as [`QUANTILES`]) per hour-of-day.
    pub offsets: [[f64; H]; 3],
}

/// Fit offsets from per-hour residual samples (actual - point forecast).
pub fn fit_quantile_bands(residuals_by_hour: &[Vec<f64>; H]) -> Result<QuantileOffsets> {
    let mut offsets = [[0.0; H]; 3];
    for (h, sample) in residuals_by_hour.iter().enumerate() {
        if sample.len() < MIN_SAMPLES_PER_HOUR {
            return Err(Error::Precondition(format!(
                "hour {h} has {} residual samples, need at least {MIN_SAMPLES_PER_HOUR}",
                sample.len()
            )));
        }
        for (qi, &q) in QUANTILES.iter().enumerate() {
            offsets[qi][h] = empirical_quantile(sample, q)?;
        }
    }
    Ok(QuantileOffsets { offsets })
}

impl QuantileOffsets {
    /// Offsets added to the point forecast, then sorted per hour so that
    /// q10 <= q50 <= q90, all clamped at zero from below.
    pub fn apply(&self, point: &[f64; H]) -> QuantileForecast {
        let mut q10 = [0.0; H];
        let mut q50 = [0.0; H];
        let mut q90 = [0.0; H];
        for h in 0..H {
            let mut vals = [
                (point[h] + self.offsets[0][h]).max(0.0),
                (point[h] + self.offsets[1][h]).max(0.0),
                (point[h] + self.offsets[2][h]).max(0.0),
            ];
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            q10[h] = vals[0];
            q50[h] = vals[1];
            q90[h] = vals[2];
        }
        QuantileForecast { q10, q50, q90 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecast::pinball_loss;

    #[test]
    fn median_of_symmetric_sample_is_zero() {
        assert_eq!(empirical_quantile(&[-1.0, 0.0, 1.0], 0.5).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_sample_returns_the_value() {
        for &q in &QUANTILES {
            assert_eq!(empirical_quantile(&[2.0, 2.0, 2.0, 2.0], q).unwrap(), 2.0);
        }
    }

    #[test]
    fn empirical_quantile_beats_every_grid_candidate() {
        use rand::Rng;
        let mut rng = crate::rng::stream(11, "quantile-oracle", 0);
        for &q in &QUANTILES {
            let sample: Vec<f64> = (0..57).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let chosen = empirical_quantile(&sample, q).unwrap();
            let loss = |offset: f64| -> f64 {
                sample.iter().map(|&r| pinball_loss(r, offset, q).unwrap()).sum()
            };
            let chosen_loss = loss(chosen);
            let mut grid = -3.2;
            while grid <= 3.2 {
                assert!(
                    chosen_loss <= loss(grid) + 1e-12,
                    "offset {chosen} loses to grid candidate {grid} at q={q}"
                );
                grid += 0.001;
            }
        }
    }

    #[test]
    fn bands_are_monotone_after_rearrangement() {
        let residuals: [Vec<f64>; H] =
            std::array::from_fn(|h| (0..20).map(|i| (i as f64 - 10.0) * 0.1 + h as f64 * 0.01).collect());
        let offsets = fit_quantile_bands(&residuals).unwrap();
        let point = [1.0; H];
        let bands = offsets.apply(&point);
        for h in 0..H {
            assert!(bands.q10[h] <= bands.q50[h]);
            assert!(bands.q50[h] <= bands.q90[h]);
            assert!(bands.q10[h] >= 0.0);
        }
    }

    #[test]
    fn too_few_samples_rejected() {
        let residuals: [Vec<f64>; H] = std::array::from_fn(|_| vec![0.0; 5]);
        assert!(fit_quantile_bands(&residuals).is_err());
    }
}
