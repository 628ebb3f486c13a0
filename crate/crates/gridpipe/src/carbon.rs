//! Deterministic CO2 attribution: interval product of consumption and grid
//! carbon intensity, daily and 30-day roll-ups, projected-vs-metered
//! comparison, and the annual-average comparator. No randomness anywhere.

use serde::{Deserialize, Serialize};

use crate::corpus::{CarbonIntensitySeries, MeterSeries};
use crate::error::{Error, Result};

pub const DAYS_PER_BLOCK: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Metered,
    Projected,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarbonEstimate {
    pub customer_id: String,
    pub per_interval_kg: Vec<f64>,
    pub basis: Basis,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FootprintReport {
    pub customer_id: String,
    pub daily_kg: Vec<f64>,
    /// Consecutive 30-day block totals.
    pub monthly_kg: Vec<f64>,
}

/// kWh x gCO2/kWh / 1000 = kg.
pub fn co2_interval(kwh: f64, ci: f64) -> Result<f64> {
    if kwh < 0.0 {
        return Err(Error::Domain(format!("negative consumption {kwh}")));
    }
    if ci <= 0.0 {
        return Err(Error::Domain(format!("non-positive carbon intensity {ci}")));
    }
    Ok(kwh * ci / 1000.0)
}

/// Metered-basis estimate over an aligned meter / CI pair.
pub fn metered_estimate(
    meter: &MeterSeries,
    ci: &CarbonIntensitySeries,
) -> Result<CarbonEstimate> {
    if meter.readings.len() != ci.values.len() {
        return Err(Error::Domain("meter and CI series misaligned".into()));
    }
    let per_interval_kg = meter
        .readings
        .iter()
        .zip(&ci.values)
        .map(|(&kwh, &ci)| co2_interval(kwh, ci))
        .collect::<Result<Vec<_>>>()?;
    Ok(CarbonEstimate {
        customer_id: meter.customer_id.clone(),
        per_interval_kg,
        basis: Basis::Metered,
    })
}

/// Estimate with the corpus-wide mean CI in place of the interval values —
/// the pre-deployment annual-average comparator.
pub fn co2_annual_average_baseline(
    meter: &MeterSeries,
    ci: &CarbonIntensitySeries,
) -> Result<CarbonEstimate> {
    if meter.readings.len() != ci.values.len() {
        return Err(Error::Domain("meter and CI series misaligned".into()));
    }
    let mean_ci = ci.values.iter().sum::<f64>() / ci.values.len() as f64;
    let per_interval_kg = meter
        .readings
        .iter()
        .map(|&kwh| co2_interval(kwh, mean_ci))
        .collect::<Result<Vec<_>>>()?;
    Ok(CarbonEstimate {
        customer_id: meter.customer_id.clone(),
        per_interval_kg,
        basis: Basis::Metered,
    })
}

/// Exact daily and 30-day-block sums, ascending interval order.
pub fn co2_rollup(estimate: &CarbonEstimate, intervals_per_day: usize) -> FootprintReport {
    let daily_kg: Vec<f64> = estimate
        .per_interval_kg
        .chunks(intervals_per_day)
        .map(|day| day.iter().sum())
        .collect();
    let monthly_kg = daily_kg
        .chunks(DAYS_PER_BLOCK)
        .map(|block| block.iter().sum())
        .collect();
    FootprintReport {
        customer_id: estimate.customer_id.clone(),
        daily_kg,
        monthly_kg,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionError {
    /// Per-day percent error, `None` where the metered day total is zero.
    pub daily_pct: Vec<Option<f64>>,
    pub zero_days_excluded: usize,
    /// Absolute monthly error in kg per 30-day block.
    pub monthly_kg_abs: Vec<f64>,
}

/// Percent error of projected daily totals against metered ground truth.
pub fn co2_projected_error(
    projected: &FootprintReport,
    metered: &FootprintReport,
) -> Result<ProjectionError> {
    if projected.daily_kg.len() != metered.daily_kg.len() {
        return Err(Error::Domain("reports cover different day ranges".into()));
    }
    let mut zero_days_excluded = 0;
    let daily_pct = projected
        .daily_kg
        .iter()
        .zip(&metered.daily_kg)
        .map(|(&p, &m)| {
            if m == 0.0 {
                zero_days_excluded += 1;
                None
            } else {
                Some(100.0 * (p - m) / m)
            }
        })
        .collect();
    let monthly_kg_abs = projected
        .monthly_kg
        .iter()
        .zip(&metered.monthly_kg)
        .map(|(&p, &m)| (p - m).abs())
        .collect();
    Ok(ProjectionError { daily_pct, zero_days_excluded, monthly_kg_abs })
}

/// Fill masked intervals with the same-interval value of the previous day;
/// returns the number of imputed intervals. Day-0 gaps fall back to zero.
pub fn impute_gaps(
    readings: &mut [f64],
    gap_mask: &[bool],
    intervals_per_day: usize,
) -> Result<usize> {
    if readings.len() != gap_mask.len() {
        return Err(Error::Domain("gap mask misaligned with readings".into()));
    }
    let mut imputed = 0;
    for idx in 0..readings.len() {
        if gap_mask[idx] {
            readings[idx] = if idx >= intervals_per_day {
                readings[idx - intervals_per_day]
            } else {
                0.0
            };
            imputed += 1;
        }
    }
    Ok(imputed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_formula_cases() {
        assert_eq!(co2_interval(1.0, 500.0).unwrap(), 0.5);
        assert_eq!(co2_interval(0.0, 321.0).unwrap(), 0.0);
        assert!((co2_interval(2.4, 250.0).unwrap() - 0.6).abs() < 1e-15);
        assert!(co2_interval(-1.0, 100.0).is_err());
        assert!(co2_interval(1.0, 0.0).is_err());
    }

    #[test]
    fn linearity() {
        let a = 3.5;
        let kwh = 1.7;
        let ci = 430.0;
        let scaled = co2_interval(a * kwh, ci).unwrap();
        assert!((scaled - a * co2_interval(kwh, ci).unwrap()).abs() < 1e-12);
    }

    fn estimate(values: Vec<f64>) -> CarbonEstimate {
        CarbonEstimate {
            customer_id: "C0000".into(),
            per_interval_kg: values,
            basis: Basis::Metered,
        }
    }

    #[test]
    fn constant_day_rolls_up_exactly() {
        let report = co2_rollup(&estimate(vec![0.01; 96]), 96);
        assert!((report.daily_kg[0] - 0.96).abs() < 1e-12);
        assert_eq!(report.monthly_kg.len(), 1);
    }

    #[test]
    fn sixty_days_make_two_blocks_and_sums_agree() {
        let per_interval: Vec<f64> = (0..60 * 96).map(|i| (i % 7) as f64 * 0.001).collect();
        let report = co2_rollup(&estimate(per_interval.clone()), 96);
        assert_eq!(report.daily_kg.len(), 60);
        assert_eq!(report.monthly_kg.len(), 2);
        let total: f64 = per_interval.iter().sum();
        let monthly_total: f64 = report.monthly_kg.iter().sum();
        let daily_total: f64 = report.daily_kg.iter().sum();
        assert!((total - monthly_total).abs() < 1e-9);
        assert!((total - daily_total).abs() < 1e-9);
    }

    #[test]
    fn projected_error_scaling_case() {
        let metered = co2_rollup(&estimate(vec![0.01; 60 * 96]), 96);
        let projected = co2_rollup(&estimate(vec![0.0103; 60 * 96]), 96);
        let err = co2_projected_error(&projected, &metered).unwrap();
        for pct in err.daily_pct.iter().flatten() {
            assert!((pct - 3.0).abs() < 1e-9);
        }
        assert_eq!(err.zero_days_excluded, 0);
    }

    #[test]
    fn identical_reports_have_zero_error() {
        let metered = co2_rollup(&estimate(vec![0.02; 2 * 96]), 96);
        let err = co2_projected_error(&metered, &metered).unwrap();
        assert!(err.daily_pct.iter().flatten().all(|&p| p == 0.0));
        assert!(err.monthly_kg_abs.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn annual_average_overestimates_midday_consumer() {
        // A customer consuming only during the solar dip: the flat-CI
        // baseline must exceed the interval method.
        let config = crate::corpus::CorpusConfig::default();
        let ci = crate::corpus::generate_ci_series(&config).unwrap();
        let mut readings = vec![0.0; config.readings_per_customer()];
        for day in 0..config.n_days {
            for interval in 48..52 {
                readings[day * 96 + interval] = 0.5;
            }
        }
        let meter = MeterSeries { customer_id: "C0000".into(), readings };
        let interval_est = metered_estimate(&meter, &ci).unwrap();
        let baseline_est = co2_annual_average_baseline(&meter, &ci).unwrap();
        let interval_total: f64 = interval_est.per_interval_kg.iter().sum();
        let baseline_total: f64 = baseline_est.per_interval_kg.iter().sum();
        assert!(
            baseline_total > interval_total,
            "baseline {baseline_total} should exceed interval {interval_total}"
        );
    }

    #[test]
    fn constant_ci_makes_baseline_equal_interval_method() {
        let meter = MeterSeries {
            customer_id: "C0000".into(),
            readings: (0..192).map(|i| (i % 5) as f64 * 0.1).collect(),
        };
        let ci = CarbonIntensitySeries { values: vec![400.0; 192] };
        let a = metered_estimate(&meter, &ci).unwrap();
        let b = co2_annual_average_baseline(&meter, &ci).unwrap();
        for (x, y) in a.per_interval_kg.iter().zip(&b.per_interval_kg) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gap_imputation_uses_previous_day() {
        let mut readings = vec![1.0; 192];
        readings[100] = 0.0;
        let mut mask = vec![false; 192];
        mask[100] = true;
        let imputed = impute_gaps(&mut readings, &mask, 96).unwrap();
        assert_eq!(imputed, 1);
        assert_eq!(readings[100], readings[4]);
    }
}
