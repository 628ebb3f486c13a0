//! Synthetic smart-meter corpus: per-customer 15-minute consumption series,
//! an aligned grid carbon-intensity feed, and a block tariff schedule.
//!
//! Generation is a pure function of [`CorpusConfig`]; every stochastic
//! component draws from its own derived stream (see [`crate::rng`]), so the
//! corpus is bit-identical across runs and independent of iteration order.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::rng;

pub const INTERVALS_PER_HOUR: usize = 4;
pub const HOURS_PER_DAY: usize = 24;

/// Configuration for corpus generation. All fields have defaults matching
/// the canonical 200-customer, 60-day corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub n_customers: usize,
    pub n_days: usize,
    pub intervals_per_day: usize,
    /// Fractions of Low / Mid / Heavy customers; must sum to 1.
    pub archetype_mix: [f64; 3],
    /// Std-dev of additive per-reading measurement noise, kWh.
    pub noise_sigma: f64,
    /// Amplitude of the annual sinusoid applied per day.
    pub seasonal_amplitude: f64,
    /// Multiplier applied on Saturdays and Sundays.
    pub weekend_factor: f64,
    /// AR(1) persistence of the shared day-level demand factor.
    pub demand_ar1_phi: f64,
    /// Innovation std-dev of the shared day-level demand factor.
    pub demand_ar1_sigma: f64,
    /// Std-dev of the shared non-persistent (white) day-level demand
    /// component.
    pub demand_iid_sigma: f64,
    /// Carbon-intensity envelope, gCO2/kWh.
    pub ci_base: f64,
    pub ci_solar_dip_depth: f64,
    pub ci_ramp_peak: f64,
    pub ci_ar1_phi: f64,
    pub ci_ar1_sigma: f64,
    /// Lower bound applied to the CI series, gCO2/kWh.
    pub ci_floor: f64,
    pub master_seed: u64,
    pub train_days: usize,
    pub test_days: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            n_customers: 200,
            n_days: 60,
            intervals_per_day: 96,
            archetype_mix: [0.3, 0.4, 0.3],
            noise_sigma: 0.03,
            seasonal_amplitude: 0.10,
            weekend_factor: 1.02,
            demand_ar1_phi: 0.6,
            demand_ar1_sigma: 0.030,
            demand_iid_sigma: 0.018,
            ci_base: 450.0,
            ci_solar_dip_depth: 150.0,
            ci_ramp_peak: 120.0,
            ci_ar1_phi: 0.8,
            ci_ar1_sigma: 15.0,
            ci_floor: 50.0,
            master_seed: 84,
            train_days: 48,
            test_days: 12,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_customers == 0 || self.n_days == 0 {
            return Err(Error::Config("counts must be positive".into()));
        }
        if self.intervals_per_day != 96 {
            return Err(Error::Config("intervals_per_day is fixed at 96".into()));
        }
        let mix_sum: f64 = self.archetype_mix.iter().sum();
        if self.archetype_mix.iter().any(|&f| f < 0.0) || (mix_sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "archetype_mix must be non-negative and sum to 1 (got sum {mix_sum})"
            )));
        }
        if self.train_days + self.test_days != self.n_days {
            return Err(Error::Config(format!(
                "train_days + test_days must equal n_days ({} + {} != {})",
                self.train_days, self.test_days, self.n_days
            )));
        }
        if self.test_days == 0 {
            return Err(Error::Config("test_days must be at least 1".into()));
        }
        if self.ci_ar1_phi.abs() >= 1.0 {
            return Err(Error::Config("|ci_ar1_phi| must be < 1".into()));
        }
        if self.demand_ar1_phi.abs() >= 1.0 {
            return Err(Error::Config("|demand_ar1_phi| must be < 1".into()));
        }
        if self.ci_floor <= 0.0 {
            return Err(Error::Config("ci_floor must be positive".into()));
        }
        if self.noise_sigma < 0.0
            || self.ci_ar1_sigma < 0.0
            || self.demand_ar1_sigma < 0.0
            || self.demand_iid_sigma < 0.0
        {
            return Err(Error::Config("sigmas must be non-negative".into()));
        }
        Ok(())
    }

    pub fn readings_per_customer(&self) -> usize {
        self.n_days * self.intervals_per_day
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Archetype {
    Low,
    Mid,
    Heavy,
}

/// Gaussian-bump shape parameters per archetype: (base kWh/interval,
/// morning peak amplitude, evening peak amplitude).
fn archetype_params(archetype: Archetype) -> (f64, f64, f64) {
    match archetype {
        Archetype::Low => (0.05, 0.15, 0.25),
        Archetype::Mid => (0.10, 0.30, 0.50),
        Archetype::Heavy => (0.18, 0.50, 0.90),
    }
}

// Bump centers in interval units: 08:00 and 20:00, matching the gas-ramp
// peaks of the CI envelope.
const MORNING_CENTER: f64 = 32.0;
const EVENING_CENTER: f64 = 80.0;
const BUMP_SIGMA: f64 = 6.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CustomerProfile {
    pub customer_id: String,
    pub archetype: Archetype,
    pub base_load: f64,
    pub morning_peak_amp: f64,
    pub evening_peak_amp: f64,
    pub per_customer_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeterSeries {
    pub customer_id: String,
    pub readings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarbonIntensitySeries {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TariffSchedule {
    /// (upper bound in kWh per billing period, rate per kWh); the final
    /// block has no upper bound.
    pub blocks: Vec<(Option<f64>, f64)>,
    pub tax_rate: f64,
}

impl Default for TariffSchedule {
    fn default() -> Self {
        Self {
            blocks: vec![(Some(100.0), 0.10), (Some(300.0), 0.18), (None, 0.25)],
            tax_rate: 0.05,
        }
    }
}

impl TariffSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Config("tariff needs at least one block".into()));
        }
        let mut prev = 0.0;
        for (i, (bound, rate)) in self.blocks.iter().enumerate() {
            if *rate < 0.0 {
                return Err(Error::Config("tariff rates must be non-negative".into()));
            }
            match bound {
                Some(b) => {
                    if *b <= prev {
                        return Err(Error::Config(
                            "tariff block bounds must be strictly increasing".into(),
                        ));
                    }
                    prev = *b;
                }
                None => {
                    if i != self.blocks.len() - 1 {
                        return Err(Error::Config(
                            "only the final tariff block may be unbounded".into(),
                        ));
                    }
                }
            }
        }
        if self.blocks.last().unwrap().0.is_some() {
            return Err(Error::Config("final tariff block must be unbounded".into()));
        }
        if self.tax_rate < 0.0 {
            return Err(Error::Config("tax_rate must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub config: CorpusConfig,
    pub profiles: Vec<CustomerProfile>,
    pub meters: Vec<MeterSeries>,
    pub ci: CarbonIntensitySeries,
    pub tariff: TariffSchedule,
}

fn gaussian_bump(x: f64, center: f64, sigma: f64) -> f64 {
    let z = (x - center) / sigma;
    (-0.5 * z * z).exp()
}

fn is_weekend(day: usize) -> bool {
    // Day 0 is a Monday.
    matches!(day % 7, 5 | 6)
}

/// Shared day-level demand factor: one AR(1) multiplier per day, common to
/// all customers (weather / behavioural variability).
fn demand_factors(config: &CorpusConfig) -> Vec<f64> {
    let mut rng = rng::stream(config.master_seed, "demand", 0);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let phi = config.demand_ar1_phi;
    let sigma = config.demand_ar1_sigma;
    let stationary_sd = sigma / (1.0 - phi * phi).sqrt();
    let mut state = stationary_sd * normal.sample(&mut rng);
    let mut factors = Vec::with_capacity(config.n_days);
    for _ in 0..config.n_days {
        let iid = config.demand_iid_sigma * normal.sample(&mut rng);
        factors.push((1.0 + state + iid).max(0.5));
        state = phi * state + sigma * normal.sample(&mut rng);
    }
    factors
}

fn generate_profiles(config: &CorpusConfig) -> Vec<CustomerProfile> {
    let n = config.n_customers;
    let n_low = (config.archetype_mix[0] * n as f64).round() as usize;
    let n_mid = (config.archetype_mix[1] * n as f64).round() as usize;
    (0..n)
        .map(|k| {
            let customer_id = format!("C{k:04}");
            let archetype = if k < n_low {
                Archetype::Low
            } else if k < (n_low + n_mid).min(n) {
                Archetype::Mid
            } else {
                Archetype::Heavy
            };
            let per_customer_seed =
                rng::derive_seed(config.master_seed, &format!("customer/{customer_id}"), 0);
            let mut profile_rng = rng::stream(per_customer_seed, "profile", 0);
            let (base, morning, evening) = archetype_params(archetype);
            // +-10% per-customer jitter on each amplitude.
            let jitter = |r: &mut rand_chacha::ChaCha8Rng| 1.0 + r.gen_range(-0.10..0.10);
            CustomerProfile {
                customer_id,
                archetype,
                base_load: base * jitter(&mut profile_rng),
                morning_peak_amp: morning * jitter(&mut profile_rng),
                evening_peak_amp: evening * jitter(&mut profile_rng),
                per_customer_seed,
            }
        })
        .collect()
}

fn generate_meter_series(
    config: &CorpusConfig,
    profile: &CustomerProfile,
    demand: &[f64],
) -> MeterSeries {
    let mut noise_rng = rng::stream(profile.per_customer_seed, "noise", 0);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let ipd = config.intervals_per_day;
    let mut readings = Vec::with_capacity(config.n_days * ipd);
    for day in 0..config.n_days {
        let weekend = if is_weekend(day) { config.weekend_factor } else { 1.0 };
        let seasonal = 1.0
            + config.seasonal_amplitude
                * (2.0 * std::f64::consts::PI * day as f64 / 365.0).sin();
        let day_factor = weekend * seasonal * demand[day];
        for interval in 0..ipd {
            let i = interval as f64;
            let shape = profile.base_load
                + profile.morning_peak_amp * gaussian_bump(i, MORNING_CENTER, BUMP_SIGMA)
                + profile.evening_peak_amp * gaussian_bump(i, EVENING_CENTER, BUMP_SIGMA);
            let noise = config.noise_sigma * normal.sample(&mut noise_rng);
            readings.push((shape * day_factor + noise).max(0.0));
        }
    }
    MeterSeries { customer_id: profile.customer_id.clone(), readings }
}

/// Deterministic daily CI envelope: solar dip centered mid-day, gas-ramp
/// bumps at 08:00 and 20:00.
pub fn ci_envelope(config: &CorpusConfig, interval: usize) -> f64 {
    let i = interval as f64;
    config.ci_base - config.ci_solar_dip_depth * gaussian_bump(i, 50.0, 4.0)
        + config.ci_ramp_peak * (gaussian_bump(i, 32.0, 4.0) + gaussian_bump(i, 80.0, 4.0))
}

/// Generate the carbon-intensity series: daily envelope plus additive AR(1)
/// noise, floored at `ci_floor`.
pub fn generate_ci_series(config: &CorpusConfig) -> Result<CarbonIntensitySeries> {
    config.validate()?;
    let mut rng = rng::stream(config.master_seed, "ci", 0);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut eps = 0.0_f64;
    let mut values = Vec::with_capacity(config.n_days * config.intervals_per_day);
    for day in 0..config.n_days {
        let _ = day;
        for interval in 0..config.intervals_per_day {
            eps = config.ci_ar1_phi * eps + config.ci_ar1_sigma * normal.sample(&mut rng);
            values.push((ci_envelope(config, interval) + eps).max(config.ci_floor));
        }
    }
    Ok(CarbonIntensitySeries { values })
}

/// Generate the full corpus from a config. Pure and deterministic.
pub fn generate_corpus(config: &CorpusConfig) -> Result<Corpus> {
    config.validate()?;
    let demand = demand_factors(config);
    let profiles = generate_profiles(config);
    let meters = profiles
        .iter()
        .map(|p| generate_meter_series(config, p, &demand))
        .collect();
    let ci = generate_ci_series(config)?;
    let tariff = TariffSchedule::default();
    tariff.validate()?;
    Ok(Corpus { config: config.clone(), profiles, meters, ci, tariff })
}

/// Chronological train/test day ranges: [0, train_days) and
/// [train_days, n_days).
pub fn split_train_test(corpus: &Corpus) -> (Range<usize>, Range<usize>) {
    let t = corpus.config.train_days;
    (0..t, t..corpus.config.n_days)
}

/// Sum 15-minute readings into hourly kWh, ascending interval order.
pub fn aggregate_hourly(readings: &[f64], intervals_per_day: usize) -> Vec<f64> {
    assert_eq!(intervals_per_day % HOURS_PER_DAY, 0);
    let per_hour = intervals_per_day / HOURS_PER_DAY;
    readings
        .chunks(per_hour)
        .map(|chunk| chunk.iter().sum())
        .collect()
}

/// Hourly carbon intensity: the mean of each hour's four interval values.
pub fn ci_hourly(ci: &CarbonIntensitySeries, intervals_per_day: usize) -> Vec<f64> {
    let per_hour = intervals_per_day / HOURS_PER_DAY;
    ci.values
        .chunks(per_hour)
        .map(|chunk| chunk.iter().sum::<f64>() / per_hour as f64)
        .collect()
}

impl Corpus {
    /// Aggregate (sum over customers) hourly consumption, full horizon.
    pub fn aggregate_hourly_signal(&self) -> Vec<f64> {
        let hours = self.config.n_days * HOURS_PER_DAY;
        let mut agg = vec![0.0; hours];
        for meter in &self.meters {
            for (h, v) in
                aggregate_hourly(&meter.readings, self.config.intervals_per_day)
                    .into_iter()
                    .enumerate()
            {
                agg[h] += v;
            }
        }
        agg
    }
}

/// Export meter readings as CSV: `customer_id,day,interval,kwh`.
pub fn export_meter_csv<W: Write>(corpus: &Corpus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["customer_id", "day", "interval", "kwh"])?;
    let ipd = corpus.config.intervals_per_day;
    for meter in &corpus.meters {
        for (idx, kwh) in meter.readings.iter().enumerate() {
            w.write_record([
                meter.customer_id.as_str(),
                &(idx / ipd).to_string(),
                &(idx % ipd).to_string(),
                &kwh.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Export the CI feed as CSV: `day,interval,ci_g_per_kwh`.
pub fn export_ci_csv<W: Write>(corpus: &Corpus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["day", "interval", "ci_g_per_kwh"])?;
    let ipd = corpus.config.intervals_per_day;
    for (idx, ci) in corpus.ci.values.iter().enumerate() {
        w.write_record([
            &(idx / ipd).to_string(),
            &(idx % ipd).to_string(),
            &ci.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> CorpusConfig {
        CorpusConfig {
            n_customers: 12,
            n_days: 20,
            train_days: 15,
            test_days: 5,
            ..CorpusConfig::default()
        }
    }

    #[test]
    fn default_corpus_has_expected_reading_count() {
        let config = CorpusConfig::default();
        assert_eq!(config.readings_per_customer() * config.n_customers, 1_152_000);
    }

    #[test]
    fn generation_is_deterministic() {
        let config = small_config();
        let a = generate_corpus(&config).unwrap();
        let b = generate_corpus(&config).unwrap();
        assert_eq!(a.meters, b.meters);
        assert_eq!(a.ci, b.ci);
    }

    #[test]
    fn readings_are_non_negative_and_sized() {
        let config = small_config();
        let corpus = generate_corpus(&config).unwrap();
        assert_eq!(corpus.meters.len(), config.n_customers);
        for meter in &corpus.meters {
            assert_eq!(meter.readings.len(), config.readings_per_customer());
            assert!(meter.readings.iter().all(|&r| r >= 0.0));
        }
        assert!(corpus.ci.values.iter().all(|&v| v >= config.ci_floor));
    }

    #[test]
    fn archetype_daily_means_are_ordered() {
        let corpus = generate_corpus(&CorpusConfig::default()).unwrap();
        let mut totals = [0.0_f64; 3];
        let mut counts = [0usize; 3];
        for (profile, meter) in corpus.profiles.iter().zip(&corpus.meters) {
            let daily_mean = meter.readings.iter().sum::<f64>() / corpus.config.n_days as f64;
            let idx = match profile.archetype {
                Archetype::Low => 0,
                Archetype::Mid => 1,
                Archetype::Heavy => 2,
            };
            totals[idx] += daily_mean;
            counts[idx] += 1;
        }
        let means: Vec<f64> = (0..3).map(|i| totals[i] / counts[i] as f64).collect();
        assert!(means[0] < means[1] && means[1] < means[2], "means {means:?}");
    }

    #[test]
    fn customer_seed_isolation() {
        let config = small_config();
        let corpus = generate_corpus(&config).unwrap();
        let demand = demand_factors(&config);
        // Renaming customer 3 changes only customer 3's stream; customer 2,
        // regenerated in isolation, is byte-identical to the corpus series.
        let mut renamed = corpus.profiles[3].clone();
        renamed.customer_id = "C9999".into();
        renamed.per_customer_seed =
            rng::derive_seed(config.master_seed, "customer/C9999", 0);
        let renamed_series = generate_meter_series(&config, &renamed, &demand);
        assert_ne!(renamed_series.readings, corpus.meters[3].readings);
        let untouched = generate_meter_series(&config, &corpus.profiles[2], &demand);
        assert_eq!(untouched.readings, corpus.meters[2].readings);
    }

    #[test]
    fn shared_streams_independent_of_customer_count() {
        let a = generate_corpus(&small_config()).unwrap();
        let mut fewer = small_config();
        fewer.n_customers = 6;
        let b = generate_corpus(&fewer).unwrap();
        assert_eq!(a.ci, b.ci);
    }

    #[test]
    fn ci_constant_when_degenerate() {
        let mut config = small_config();
        config.ci_ar1_sigma = 0.0;
        config.ci_solar_dip_depth = 0.0;
        config.ci_ramp_peak = 0.0;
        let ci = generate_ci_series(&config).unwrap();
        assert!(ci.values.iter().all(|&v| (v - config.ci_base).abs() < 1e-12));
    }

    #[test]
    fn ci_midday_below_morning_ramp() {
        let config = CorpusConfig::default();
        let ci = generate_ci_series(&config).unwrap();
        let ipd = config.intervals_per_day;
        let mean_at = |interval: usize| -> f64 {
            (0..config.n_days).map(|d| ci.values[d * ipd + interval]).sum::<f64>()
                / config.n_days as f64
        };
        // 12:00 (interval 48) vs 08:00 (interval 32).
        assert!(mean_at(48) < mean_at(32));
    }

    #[test]
    fn ci_residual_autocorrelation_matches_phi() {
        let config = CorpusConfig::default();
        let ci = generate_ci_series(&config).unwrap();
        let ipd = config.intervals_per_day;
        let residuals: Vec<f64> = ci
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| v - ci_envelope(&config, idx % ipd))
            .collect();
        let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
        let var: f64 = residuals.iter().map(|r| (r - mean).powi(2)).sum();
        let cov: f64 = residuals
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum();
        let rho = cov / var;
        assert!(
            (rho - config.ci_ar1_phi).abs() < 0.1,
            "lag-1 autocorrelation {rho} vs phi {}",
            config.ci_ar1_phi
        );
    }

    #[test]
    fn split_is_exhaustive_partition() {
        let corpus = generate_corpus(&small_config()).unwrap();
        let (train, test) = split_train_test(&corpus);
        assert_eq!(train, 0..15);
        assert_eq!(test, 15..20);
        assert_eq!(train.end, test.start);
        assert_eq!(test.end, corpus.config.n_days);
    }

    #[test]
    fn empty_test_split_rejected() {
        let mut config = small_config();
        config.train_days = 20;
        config.test_days = 0;
        assert!(matches!(generate_corpus(&config), Err(Error::Config(_))));
    }

    #[test]
    fn bad_mix_rejected() {
        let mut config = small_config();
        config.archetype_mix = [0.5, 0.4, 0.4];
        assert!(matches!(generate_corpus(&config), Err(Error::Config(_))));
    }

    #[test]
    fn hourly_aggregation_sums_energy() {
        let hourly = aggregate_hourly(&[0.1, 0.2, 0.3, 0.4], 96);
        assert!((hourly[0] - 1.0).abs() < 1e-15);

        let corpus = generate_corpus(&small_config()).unwrap();
        for meter in &corpus.meters {
            let hourly = aggregate_hourly(&meter.readings, 96);
            assert_eq!(hourly.len(), corpus.config.n_days * HOURS_PER_DAY);
            let total: f64 = meter.readings.iter().sum();
            let total_hourly: f64 = hourly.iter().sum();
            assert!((total - total_hourly).abs() < 1e-9 * total.max(1.0));
        }
    }

    #[test]
    fn all_zero_day_aggregates_to_zeros() {
        let hourly = aggregate_hourly(&vec![0.0; 96], 96);
        assert_eq!(hourly, vec![0.0; 24]);
    }
}
