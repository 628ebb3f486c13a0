//! Five-phase orchestration: corpus generation, validation/split, per-arm
//! modelling (forecast, CO2, optimisation, billing), metric computation, and
//! artefact emission — plus the five-arm component-substitution matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::billgen::{
    assemble_bill_input, audit_statement, generate_statement, hallucination_rate,
    export_panel_csv, BillInput, BillStatement, Policy, TemplateBackend,
};
use crate::carbon::{
    co2_annual_average_baseline, co2_projected_error, co2_rollup, impute_gaps,
    metered_estimate, FootprintReport,
};
use crate::corpus::{
    aggregate_hourly, ci_hourly, generate_corpus, split_train_test, Corpus,
    CorpusConfig, HOURS_PER_DAY,
};
use crate::error::{Error, Result};
use crate::forecast::{
    customer_quantiles, evaluate_method, forecast_all, BaselineKind, ForecastKnobs,
    ForecastSet, MethodEvaluation, QuantileForecast,
};
use crate::qubo::{build_dr_qubo, DrConfig, QuboInstance, ShiftCandidate};
use crate::rng;
use crate::solver::{
    export_traces_csv, solve_bsb, solve_greedy, solve_sa, tune_sa, SbParams,
    SolveResult,
};

const H: usize = HOURS_PER_DAY;
/// Days per billing period; two periods cover the 60-day corpus.
const BILLING_PERIOD_DAYS: usize = 30;

/// Which component substitution a run applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AblationArm {
    Full,
    NoConstrainedDecoding,
    SmaInsteadOfSurrogate,
    SaInsteadOfSb,
    AllThree,
}

impl AblationArm {
    pub const ALL: [AblationArm; 5] = [
        AblationArm::Full,
        AblationArm::NoConstrainedDecoding,
        AblationArm::SmaInsteadOfSurrogate,
        AblationArm::SaInsteadOfSb,
        AblationArm::AllThree,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            AblationArm::Full => "full",
            AblationArm::NoConstrainedDecoding => "no_constrained_decoding",
            AblationArm::SmaInsteadOfSurrogate => "sma_instead_of_surrogate",
            AblationArm::SaInsteadOfSb => "sa_instead_of_sb",
            AblationArm::AllThree => "all_three",
        }
    }

    /// Point-forecast method feeding the DR chain and the billing projection.
    pub fn forecast_kind(&self) -> BaselineKind {
        match self {
            AblationArm::SmaInsteadOfSurrogate | AblationArm::AllThree => BaselineKind::Sma,
            _ => BaselineKind::Surrogate,
        }
    }

    /// Whether the DR schedule comes from tuned SA instead of ballistic SB.
    pub fn uses_sa(&self) -> bool {
        matches!(self, AblationArm::SaInsteadOfSb | AblationArm::AllThree)
    }

    /// Whether bill generation drops the constrained decoding policy.
    pub fn faulty_billing(&self) -> bool {
        matches!(self, AblationArm::NoConstrainedDecoding | AblationArm::AllThree)
    }
}

impl fmt::Display for AblationArm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AblationArm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        AblationArm::ALL
            .into_iter()
            .find(|arm| arm.label() == norm)
            .ok_or_else(|| Error::Config(format!("unknown ablation arm '{s}'")))
    }
}

/// SB settings used on the demand-response instance. The instance's dense
/// couplings sit far from the unit scale the textbook defaults assume, so the
/// coupling is norm-scaled and the ramp shortened; the short ramp locks the
/// spins within a few steps without hurting the reached objective.
pub fn dr_sb_params() -> SbParams {
    SbParams {
        coupling_c: 1.0,
        i_max: 20,
        auto_scale_c: true,
        ..SbParams::default()
    }
}

/// Everything one run needs. `output_dir` is excluded from the provenance
/// hash so identical configurations written to different directories produce
/// identical summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusConfig,
    pub forecast: ForecastKnobs,
    pub dr: DrConfig,
    pub sb: SbParams,
    pub sa_tune_trials: usize,
    pub sa_tune_seed: u64,
    /// Seed for the injected numeric fault of unconstrained billing.
    pub fault_seed: u64,
    /// Held-out statement panel size.
    pub panel_size: usize,
    pub ablation: AblationArm,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: CorpusConfig::default(),
            forecast: ForecastKnobs::default(),
            dr: DrConfig::default(),
            sb: dr_sb_params(),
            sa_tune_trials: 100,
            sa_tune_seed: 42,
            fault_seed: 7,
            panel_size: 30,
            ablation: AblationArm::Full,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.corpus.validate()?;
        if self.sa_tune_trials == 0 {
            return Err(Error::Config("sa_tune_trials must be positive".into()));
        }
        if self.panel_size == 0 || self.panel_size > self.corpus.n_customers {
            return Err(Error::Config(format!(
                "panel_size must be in 1..={}",
                self.corpus.n_customers
            )));
        }
        if self.dr.instance_day >= self.corpus.test_days {
            return Err(Error::Config("dr.instance_day outside the test split".into()));
        }
        if self.corpus.n_days < 2 * BILLING_PERIOD_DAYS {
            return Err(Error::Config("corpus too short for two billing periods".into()));
        }
        Ok(())
    }

    /// Hash of the run-defining configuration (everything but `output_dir`).
    pub fn config_hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.output_dir = PathBuf::new();
        let json = serde_json::to_string(&hashed).expect("config serialises");
        hex_digest(json.as_bytes())
    }
}

/// Day-level key performance indicators of an accepted shift schedule.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DrKpis {
    pub peak_reduction_pct: f64,
    pub co2_reduction_pct: f64,
    pub kg_saved: f64,
    pub currency_saved: f64,
}

/// Apply an accepted schedule to the aggregate q50 profile and report the
/// peak and emission effects. Baselines come from the same forecasts, so an
/// empty schedule yields exact zeros.
pub fn compute_dr_kpis(
    schedule: &[ShiftCandidate],
    forecasts: &[QuantileForecast],
    ci_day: &[f64; H],
    shadow_price: f64,
) -> DrKpis {
    let mut aggregate = [0.0_f64; H];
    for forecast in forecasts {
        for h in 0..H {
            aggregate[h] += forecast.q50[h];
        }
    }
    let mut shifted = aggregate;
    let mut kg_saved = 0.0;
    for candidate in schedule {
        shifted[candidate.from_hour] -= candidate.expected_kwh;
        shifted[candidate.to_hour] += candidate.expected_kwh;
        kg_saved += candidate.co2_saved_kg;
    }
    let peak_before = aggregate.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peak_after = shifted.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let baseline_kg: f64 = (0..H).map(|h| aggregate[h] * ci_day[h] / 1000.0).sum();
    let peak_reduction_pct = if schedule.is_empty() || peak_before <= 0.0 {
        0.0
    } else {
        100.0 * (peak_before - peak_after) / peak_before
    };
    let co2_reduction_pct = if schedule.is_empty() || baseline_kg <= 0.0 {
        0.0
    } else {
        100.0 * kg_saved / baseline_kg
    };
    DrKpis {
        peak_reduction_pct,
        co2_reduction_pct,
        kg_saved,
        currency_saved: shadow_price * kg_saved,
    }
}

/// Delivered savings of one accepted shift against metered truth: the
/// customer can only move what they actually consumed, and any promised but
/// undelivered kWh is procured back at the from-hour's intensity.
fn realized_shift_kg(candidate: &ShiftCandidate, actual_from_kwh: f64, ci_day: &[f64; H]) -> f64 {
    let delivered = candidate.expected_kwh.min(actual_from_kwh);
    let shortfall = (candidate.expected_kwh - actual_from_kwh).max(0.0);
    (ci_day[candidate.from_hour] - ci_day[candidate.to_hour]) / 1000.0
        * (delivered - shortfall).max(0.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverRow {
    pub method: String,
    pub energy: f64,
    pub iterations_to_converge: usize,
}

/// Corpus-wide summary of the annual-average projection against the metered
/// ground truth.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Co2Summary {
    /// Mean |per-day percent error| over all customer-days with consumption.
    pub mean_abs_daily_pct: f64,
    pub zero_days_excluded: usize,
    /// Mean absolute 30-day-block gap in kg per customer.
    pub mean_monthly_gap_kg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub config_hash: String,
    /// sha256 hex per emitted file, keyed by path relative to the output dir.
    pub artifact_checksums: BTreeMap<String, String>,
}

/// The audit-trail record of one pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub arm: AblationArm,
    /// All six methods evaluated on the aggregate test signal.
    pub forecast: Vec<MethodEvaluation>,
    /// Aggregate test MAPE of the arm's own forecasting method.
    pub forecast_mape_pct: f64,
    /// Canonical-instance benchmark of the three optimisers.
    pub solver: Vec<SolverRow>,
    /// Convergence iterations of the arm's optimiser on the canonical
    /// instance — the optimiser column of the substitution matrix.
    pub optimiser_iterations: usize,
    pub co2: Co2Summary,
    /// Forecast-basis KPIs of the arm's accepted schedule.
    pub dr_kpis: DrKpis,
    /// Delivered savings of the arm's schedule against metered truth.
    pub realized_co2_kg: f64,
    pub realized_co2_reduction_pct: f64,
    pub hallucination_rate: f64,
    pub accepted_shifts: usize,
    pub provenance: Provenance,
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn phase_err(phase: &str, err: Error) -> Error {
    Error::Phase { phase: phase.to_string(), cause: err.to_string() }
}

struct Artifacts {
    root: PathBuf,
    checksums: BTreeMap<String, String>,
}

impl Artifacts {
    fn new(root: &Path) -> Result<Self> {
        for dir in ["reports", "figures", "tables", "statements"] {
            fs::create_dir_all(root.join(dir))?;
        }
        Ok(Self { root: root.to_path_buf(), checksums: BTreeMap::new() })
    }

    fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        fs::write(self.root.join(rel), bytes)?;
        self.checksums.insert(rel.to_string(), hex_digest(bytes));
        Ok(())
    }
}

/// Remove the artefacts a run writes, leaving unrelated directory content
/// untouched.
fn remove_outputs(root: &Path) {
    for dir in ["reports", "figures", "tables", "statements"] {
        let _ = fs::remove_dir_all(root.join(dir));
    }
    let _ = fs::remove_file(root.join("summary.json"));
}

/// Intermediate state shared by the modelling and metric phases.
struct ModelState {
    hourly: Vec<Vec<f64>>,
    aggregate_actual: Vec<f64>,
    sets: Vec<ForecastSet>,
    evaluations: Vec<MethodEvaluation>,
    arm_quantiles: Vec<Vec<QuantileForecast>>,
    metered_rollups: Vec<FootprintReport>,
    annual_rollups: Vec<FootprintReport>,
    co2: Co2Summary,
    ci_day: [f64; H],
    canonical: QuboInstance,
    sb_result: SolveResult,
    sa_result: SolveResult,
    greedy_result: SolveResult,
    arm_schedule: Vec<(usize, ShiftCandidate)>,
    arm_day_forecasts: Vec<QuantileForecast>,
    bills: Vec<(BillStatement, BillInput)>,
    constrained_rate: f64,
    faulty_rate: f64,
    arm_rate: f64,
}

/// Run the five phases for one arm and emit every artefact.
pub fn run_pipeline(config: &RunConfig) -> Result<RunSummary> {
    config.validate().map_err(|e| phase_err("configuration", e))?;

    // Phase 1 — corpus generation.
    let corpus = generate_corpus(&config.corpus).map_err(|e| phase_err("corpus", e))?;

    // Phase 2 — validation and split.
    validate_phase(config, &corpus).map_err(|e| phase_err("validate", e))?;

    // Phase 3 — per-arm models.
    let mut state = model_phase(config, &corpus).map_err(|e| phase_err("models", e))?;

    // Phase 4 — metrics.
    let (dr_kpis, realized_kg, realized_pct) =
        metric_phase(config, &state).map_err(|e| phase_err("metrics", e))?;

    // Phase 5 — artefact emission; partial output is removed on failure.
    let summary = match emit_phase(config, &corpus, &mut state, &dr_kpis, realized_kg, realized_pct)
    {
        Ok(summary) => summary,
        Err(e) => {
            remove_outputs(&config.output_dir);
            return Err(phase_err("emit", e));
        }
    };
    Ok(summary)
}

fn validate_phase(config: &RunConfig, corpus: &Corpus) -> Result<()> {
    let expected = config.corpus.n_customers * config.corpus.readings_per_customer();
    let total: usize = corpus.meters.iter().map(|m| m.readings.len()).sum();
    if total != expected {
        return Err(Error::Domain(format!(
            "corpus holds {total} readings, expected {expected}"
        )));
    }
    let (train, test) = split_train_test(corpus);
    if train.len() != config.corpus.train_days || test.len() != config.corpus.test_days {
        return Err(Error::Domain("train/test split inconsistent".into()));
    }
    // Gap-imputation hook: the synthetic corpus is gap-free, so the cleaning
    // stage must be a verified no-op.
    let mask = vec![false; config.corpus.readings_per_customer()];
    for meter in &corpus.meters {
        let mut readings = meter.readings.clone();
        let imputed = impute_gaps(&mut readings, &mask, config.corpus.intervals_per_day)?;
        if imputed != 0 || readings != meter.readings {
            return Err(Error::Domain("imputation altered a gap-free series".into()));
        }
    }
    Ok(())
}

fn model_phase(config: &RunConfig, corpus: &Corpus) -> Result<ModelState> {
    let ipd = config.corpus.intervals_per_day;
    let n_days = config.corpus.n_days;
    let train_days = config.corpus.train_days;

    let hourly: Vec<Vec<f64>> = corpus
        .meters
        .iter()
        .map(|m| aggregate_hourly(&m.readings, ipd))
        .collect();
    let mut aggregate_actual = vec![0.0; n_days * H];
    for series in &hourly {
        for (i, v) in series.iter().enumerate() {
            aggregate_actual[i] += v;
        }
    }

    // All six forecasting methods, each evaluated on the aggregate signal.
    let mut sets = Vec::new();
    let mut evaluations = Vec::new();
    for kind in BaselineKind::ALL {
        let set = forecast_all(&hourly, n_days, train_days, kind, &config.forecast)?;
        evaluations.push(evaluate_method(&set, &aggregate_actual, train_days, &config.forecast)?);
        sets.push(set);
    }
    let set_for = |kind: BaselineKind| -> &ForecastSet {
        sets.iter().find(|s| s.kind == kind).expect("all kinds ran")
    };

    let surrogate_quantiles =
        customer_quantiles(set_for(BaselineKind::Surrogate), &hourly, train_days)?;
    let arm_kind = config.ablation.forecast_kind();
    let arm_quantiles = if arm_kind == BaselineKind::Surrogate {
        surrogate_quantiles.clone()
    } else {
        customer_quantiles(set_for(arm_kind), &hourly, train_days)?
    };

    // CO2 attribution: metered truth and the annual-average comparator.
    let mut metered_rollups = Vec::new();
    let mut annual_rollups = Vec::new();
    let mut abs_pct_sum = 0.0;
    let mut abs_pct_count = 0usize;
    let mut zero_days = 0usize;
    let mut monthly_gap_sum = 0.0;
    let mut monthly_gap_count = 0usize;
    for meter in &corpus.meters {
        let metered = co2_rollup(&metered_estimate(meter, &corpus.ci)?, ipd);
        let annual = co2_rollup(&co2_annual_average_baseline(meter, &corpus.ci)?, ipd);
        let error = co2_projected_error(&annual, &metered)?;
        for pct in error.daily_pct.iter().flatten() {
            abs_pct_sum += pct.abs();
            abs_pct_count += 1;
        }
        zero_days += error.zero_days_excluded;
        for gap in &error.monthly_kg_abs {
            monthly_gap_sum += gap;
            monthly_gap_count += 1;
        }
        metered_rollups.push(metered);
        annual_rollups.push(annual);
    }
    let co2 = Co2Summary {
        mean_abs_daily_pct: abs_pct_sum / abs_pct_count.max(1) as f64,
        zero_days_excluded: zero_days,
        mean_monthly_gap_kg: monthly_gap_sum / monthly_gap_count.max(1) as f64,
    };

    // Headroom caps reference the historical (training) mean day, not the
    // arm's forecast, so a biased forecast cannot inflate its own caps.
    let mut headroom_reference = [0.0_f64; H];
    for day in 0..train_days {
        for h in 0..H {
            headroom_reference[h] += aggregate_actual[day * H + h];
        }
    }
    for value in &mut headroom_reference {
        *value /= train_days as f64;
    }

    let instance_day = train_days + config.dr.instance_day;
    let ci_by_hour = ci_hourly(&corpus.ci, ipd);
    let mut ci_day = [0.0_f64; H];
    ci_day.copy_from_slice(&ci_by_hour[instance_day * H..(instance_day + 1) * H]);

    // Canonical instance (surrogate-fed) benchmarks the optimisers; the
    // arm's own instance drives its accepted schedule.
    let canonical_day: Vec<QuantileForecast> = surrogate_quantiles
        .iter()
        .map(|q| q[config.dr.instance_day].clone())
        .collect();
    let canonical = build_dr_qubo(
        &corpus.profiles,
        &canonical_day,
        &ci_day,
        &config.dr,
        Some(&headroom_reference),
    )?;
    let sb_result = solve_bsb(&canonical, &config.sb)?;
    let sa_params = tune_sa(&canonical, config.sa_tune_trials, config.sa_tune_seed)?;
    let sa_result = solve_sa(&canonical, &sa_params)?;
    let greedy_result = solve_greedy(&canonical)?;

    let arm_day_forecasts: Vec<QuantileForecast> = arm_quantiles
        .iter()
        .map(|q| q[config.dr.instance_day].clone())
        .collect();
    let arm_instance = if arm_kind == BaselineKind::Surrogate {
        canonical.clone()
    } else {
        build_dr_qubo(
            &corpus.profiles,
            &arm_day_forecasts,
            &ci_day,
            &config.dr,
            Some(&headroom_reference),
        )?
    };
    let arm_result = if config.ablation.uses_sa() {
        let params = tune_sa(&arm_instance, config.sa_tune_trials, config.sa_tune_seed)?;
        solve_sa(&arm_instance, &params)?
    } else {
        solve_bsb(&arm_instance, &config.sb)?
    };
    let arm_schedule: Vec<(usize, ShiftCandidate)> = arm_result
        .assignment
        .iter()
        .enumerate()
        .filter(|(_, &bit)| bit == 1)
        .map(|(i, _)| (i, arm_instance.candidates[i].clone()))
        .collect();

    // Billing: two 30-day periods per customer, the arm's decoding policy.
    let backend = TemplateBackend;
    let mut bills = Vec::new();
    for (index, meter) in corpus.meters.iter().enumerate() {
        let projected_daily: f64 = (train_days..n_days)
            .map(|day| {
                arm_quantiles[index][day - train_days].q50.iter().sum::<f64>()
            })
            .sum::<f64>()
            / (n_days - train_days) as f64;
        let expected_kwh = projected_daily * BILLING_PERIOD_DAYS as f64;
        let mut prev_raw = 0.0;
        for period in 0..2usize {
            let start = period * BILLING_PERIOD_DAYS;
            let end = start + BILLING_PERIOD_DAYS;
            let input = assemble_bill_input(
                &meter.customer_id,
                (start, end),
                &meter.readings,
                ipd,
                &corpus.tariff,
                prev_raw,
                metered_rollups[index].monthly_kg[period],
                expected_kwh,
            )?;
            let policy = if config.ablation.faulty_billing() {
                Policy::UnconstrainedFaulty(rng::derive_seed(
                    config.fault_seed,
                    "bill-statement",
                    (index * 2 + period) as u64,
                ))
            } else {
                Policy::Constrained
            };
            let statement = generate_statement(&input, policy, &backend)?;
            bills.push((statement, input));
            prev_raw = meter.readings[start * ipd..end * ipd].iter().sum();
        }
    }

    // Held-out panel: the last `panel_size` customers' second-period bills,
    // audited under both policies for the headline comparison.
    let panel_start = config.corpus.n_customers - config.panel_size;
    let mut constrained_panel = Vec::new();
    let mut faulty_panel = Vec::new();
    for index in panel_start..config.corpus.n_customers {
        let (_, input) = &bills[index * 2 + 1];
        let constrained = generate_statement(input, Policy::Constrained, &backend)?;
        let faulty = generate_statement(
            input,
            Policy::UnconstrainedFaulty(rng::derive_seed(
                config.fault_seed,
                "bill-statement",
                (index * 2 + 1) as u64,
            )),
            &backend,
        )?;
        constrained_panel.push((constrained, input.clone()));
        faulty_panel.push((faulty, input.clone()));
    }
    let constrained_rate = hallucination_rate(&constrained_panel)?;
    let faulty_rate = hallucination_rate(&faulty_panel)?;
    let arm_rate = if config.ablation.faulty_billing() { faulty_rate } else { constrained_rate };

    Ok(ModelState {
        hourly,
        aggregate_actual,
        sets,
        evaluations,
        arm_quantiles,
        metered_rollups,
        annual_rollups,
        co2,
        ci_day,
        canonical,
        sb_result,
        sa_result,
        greedy_result,
        arm_schedule,
        arm_day_forecasts,
        bills,
        constrained_rate,
        faulty_rate,
        arm_rate,
    })
}

fn metric_phase(config: &RunConfig, state: &ModelState) -> Result<(DrKpis, f64, f64)> {
    let schedule: Vec<ShiftCandidate> =
        state.arm_schedule.iter().map(|(_, c)| c.clone()).collect();
    let dr_kpis = compute_dr_kpis(
        &schedule,
        &state.arm_day_forecasts,
        &state.ci_day,
        config.dr.shadow_price,
    );

    let instance_day = config.corpus.train_days + config.dr.instance_day;
    let realized_kg: f64 = state
        .arm_schedule
        .iter()
        .map(|(customer, candidate)| {
            let actual = state.hourly[*customer][instance_day * H + candidate.from_hour];
            realized_shift_kg(candidate, actual, &state.ci_day)
        })
        .sum();
    let actual_day_kg: f64 = (0..H)
        .map(|h| state.aggregate_actual[instance_day * H + h] * state.ci_day[h] / 1000.0)
        .sum();
    let realized_pct = if actual_day_kg > 0.0 { 100.0 * realized_kg / actual_day_kg } else { 0.0 };
    Ok((dr_kpis, realized_kg, realized_pct))
}

fn emit_phase(
    config: &RunConfig,
    corpus: &Corpus,
    state: &mut ModelState,
    dr_kpis: &DrKpis,
    realized_kg: f64,
    realized_pct: f64,
) -> Result<RunSummary> {
    let mut artifacts = Artifacts::new(&config.output_dir)?;
    let train_days = config.corpus.train_days;
    let n_days = config.corpus.n_days;

    // Statements: plain text plus a sidecar with spans and the audit.
    for (statement, input) in &state.bills {
        let period = input.period.0 / BILLING_PERIOD_DAYS + 1;
        let stem = format!("statements/{}_p{period}", input.customer_id);
        artifacts.write(&format!("{stem}.txt"), statement.text.as_bytes())?;
        let audit = audit_statement(statement, input);
        let sidecar = serde_json::to_vec_pretty(&serde_json::json!({
            "customer_id": statement.customer_id,
            "numeric_spans": statement.numeric_spans,
            "audit": audit,
        }))?;
        artifacts.write(&format!("{stem}.json"), &sidecar)?;
    }

    // CO2 footprint per customer-period, metered against the annual-average
    // comparator.
    let mut footprint = String::from("customer_id,period,metered_kg,annual_average_kg\n");
    for (index, metered) in state.metered_rollups.iter().enumerate() {
        for period in 0..metered.monthly_kg.len() {
            footprint.push_str(&format!(
                "{},{},{},{}\n",
                metered.customer_id,
                period + 1,
                metered.monthly_kg[period],
                state.annual_rollups[index].monthly_kg[period],
            ));
        }
    }
    artifacts.write("reports/co2_footprint.csv", footprint.as_bytes())?;

    // Per-day CO2 report: metered against the annual-average projection.
    let mut daily = String::from("customer_id,day,kg_metered,kg_projected,pct_error\n");
    for (index, metered) in state.metered_rollups.iter().enumerate() {
        for day in 0..n_days {
            let m = metered.daily_kg[day];
            let p = state.annual_rollups[index].daily_kg[day];
            let pct = if m > 0.0 {
                (100.0 * (p - m) / m).to_string()
            } else {
                "n/a".to_string()
            };
            daily.push_str(&format!("{},{day},{m},{p},{pct}\n", metered.customer_id));
        }
    }
    artifacts.write("reports/co2_daily.csv", daily.as_bytes())?;

    // Quantile bands of the arm's forecaster over the test split.
    let mut bands = String::from("customer_id,day,hour,q10,q50,q90\n");
    for (index, per_day) in state.arm_quantiles.iter().enumerate() {
        for (offset, q) in per_day.iter().enumerate() {
            let day = train_days + offset;
            for h in 0..H {
                bands.push_str(&format!(
                    "{},{day},{h},{},{},{}\n",
                    corpus.profiles[index].customer_id, q.q10[h], q.q50[h], q.q90[h]
                ));
            }
        }
    }
    artifacts.write("reports/forecast_bands.csv", bands.as_bytes())?;

    // Canonical DR instance, round-trippable into the solve subcommand.
    let instance_json = serde_json::to_vec_pretty(&state.canonical)?;
    artifacts.write("reports/dr_instance.json", &instance_json)?;

    // DR recommendation packet.
    let shifts: Vec<_> = state
        .arm_schedule
        .iter()
        .map(|(_, c)| {
            serde_json::json!({
                "customer_id": c.customer_id,
                "from_hour": c.from_hour,
                "to_hour": c.to_hour,
                "expected_kwh": c.expected_kwh,
                "co2_saved_kg": c.co2_saved_kg,
                "currency_saved": config.dr.shadow_price * c.co2_saved_kg,
            })
        })
        .collect();
    let packet = serde_json::to_vec_pretty(&serde_json::json!({
        "instance_day": train_days + config.dr.instance_day,
        "shifts": shifts,
        "total_kg_saved": dr_kpis.kg_saved,
        "total_currency_saved": dr_kpis.currency_saved,
    }))?;
    artifacts.write("reports/dr_packet.json", &packet)?;

    // Panel metrics under both policies.
    let mut panel_csv = Vec::new();
    export_panel_csv(
        &[
            ("constrained", config.panel_size, state.constrained_rate),
            ("unconstrained_faulty", config.panel_size, state.faulty_rate),
        ],
        &mut panel_csv,
    )?;
    artifacts.write("reports/panel_metrics.csv", &panel_csv)?;

    // Forecast metric table.
    let mut metrics_csv =
        String::from("method,mape_pct,rmse_kwh,pinball,coverage,used_fallback\n");
    for eval in &state.evaluations {
        metrics_csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            eval.kind.label(),
            eval.metrics.mape_pct,
            eval.metrics.rmse_kwh,
            eval.metrics.pinball,
            eval.coverage,
            eval.used_fallback,
        ));
    }
    artifacts.write("tables/forecast_metrics.csv", metrics_csv.as_bytes())?;

    // Headline comparison: best classical baseline against the proposed
    // component, one row per axis.
    let surrogate_mape = state
        .evaluations
        .iter()
        .find(|e| e.kind == BaselineKind::Surrogate)
        .map(|e| e.metrics.mape_pct)
        .unwrap_or(f64::NAN);
    let best_classical = state
        .evaluations
        .iter()
        .filter(|e| e.kind != BaselineKind::Surrogate)
        .map(|e| e.metrics.mape_pct)
        .fold(f64::INFINITY, f64::min);
    let headline = format!(
        "metric,baseline,proposed\n\
         forecast_test_mape_pct,{best_classical},{surrogate_mape}\n\
         optimiser_energy,{},{}\n\
         optimiser_convergence_iterations,{},{}\n\
         co2_mean_monthly_gap_kg,{},0\n\
         hallucination_rate,{},{}\n",
        state.sa_result.energy,
        state.sb_result.energy,
        state.sa_result.iterations_to_converge,
        state.sb_result.iterations_to_converge,
        state.co2.mean_monthly_gap_kg,
        state.faulty_rate,
        state.constrained_rate,
    );
    artifacts.write("tables/headline.csv", headline.as_bytes())?;

    // Figure data. 1: aggregate day-ahead forecasts over the test split.
    let mut forecast_fig = String::from("day,hour,actual");
    for set in &state.sets {
        forecast_fig.push(',');
        forecast_fig.push_str(set.kind.label());
    }
    forecast_fig.push('\n');
    let aggregates: Vec<Vec<f64>> = state.sets.iter().map(|s| s.aggregate()).collect();
    for day in train_days..n_days {
        for h in 0..H {
            forecast_fig.push_str(&format!(
                "{day},{h},{}",
                state.aggregate_actual[day * H + h]
            ));
            for (set, aggregate) in state.sets.iter().zip(&aggregates) {
                forecast_fig.push(',');
                let value = aggregate[(day - set.start_day) * H + h];
                forecast_fig.push_str(&value.to_string());
            }
            forecast_fig.push('\n');
        }
    }
    artifacts.write("figures/forecast_test_days.csv", forecast_fig.as_bytes())?;

    // 2: optimiser convergence traces on the canonical instance.
    let mut traces_csv = Vec::new();
    export_traces_csv(
        &[
            ("bsb", &state.sb_result.trace),
            ("sa_tuned", &state.sa_result.trace),
            ("greedy", &state.greedy_result.trace),
        ],
        &mut traces_csv,
    )?;
    artifacts.write("figures/solver_traces.csv", &traces_csv)?;

    // 3: per-day percent error of the annual-average projection, aggregate
    // across customers.
    let mut co2_fig = String::from("day,projected_error_pct\n");
    for day in 0..n_days {
        let metered: f64 = state.metered_rollups.iter().map(|r| r.daily_kg[day]).sum();
        let projected: f64 = state.annual_rollups.iter().map(|r| r.daily_kg[day]).sum();
        let pct = if metered > 0.0 {
            (100.0 * (projected - metered) / metered).to_string()
        } else {
            "n/a".to_string()
        };
        co2_fig.push_str(&format!("{day},{pct}\n"));
    }
    artifacts.write("figures/co2_projected_error.csv", co2_fig.as_bytes())?;

    // 4: KPI bars; human-process indices have no computable definition.
    let kpi_fig = format!(
        "kpi,value\n\
         peak_reduction_pct,{}\n\
         co2_reduction_pct,{}\n\
         kg_saved,{}\n\
         currency_saved,{}\n\
         realized_co2_kg,{realized_kg}\n\
         drafting_time_index,n/a\n\
         review_effort_index,n/a\n",
        dr_kpis.peak_reduction_pct,
        dr_kpis.co2_reduction_pct,
        dr_kpis.kg_saved,
        dr_kpis.currency_saved,
    );
    artifacts.write("figures/dr_kpis.csv", kpi_fig.as_bytes())?;

    let summary = RunSummary {
        arm: config.ablation,
        forecast: state.evaluations.clone(),
        forecast_mape_pct: state
            .evaluations
            .iter()
            .find(|e| e.kind == config.ablation.forecast_kind())
            .map(|e| e.metrics.mape_pct)
            .unwrap_or(f64::NAN),
        solver: vec![
            SolverRow {
                method: "bsb".into(),
                energy: state.sb_result.energy,
                iterations_to_converge: state.sb_result.iterations_to_converge,
            },
            SolverRow {
                method: "sa_tuned".into(),
                energy: state.sa_result.energy,
                iterations_to_converge: state.sa_result.iterations_to_converge,
            },
            SolverRow {
                method: "greedy".into(),
                energy: state.greedy_result.energy,
                iterations_to_converge: state.greedy_result.iterations_to_converge,
            },
        ],
        optimiser_iterations: if config.ablation.uses_sa() {
            state.sa_result.iterations_to_converge
        } else {
            state.sb_result.iterations_to_converge
        },
        co2: state.co2.clone(),
        dr_kpis: dr_kpis.clone(),
        realized_co2_kg: realized_kg,
        realized_co2_reduction_pct: realized_pct,
        hallucination_rate: state.arm_rate,
        accepted_shifts: state.arm_schedule.len(),
        provenance: Provenance {
            seed: corpus.config.master_seed,
            config_hash: config.config_hash(),
            artifact_checksums: artifacts.checksums.clone(),
        },
    };
    let summary_json = serde_json::to_vec_pretty(&summary)?;
    fs::write(config.output_dir.join("summary.json"), summary_json)?;
    Ok(summary)
}

/// Run all five arms with the same seed and emit the substitution matrix CSV
/// alongside each arm's full output tree.
pub fn run_ablation(base: &RunConfig) -> Result<Vec<RunSummary>> {
    let mut summaries = Vec::new();
    for arm in AblationArm::ALL {
        let mut config = base.clone();
        config.ablation = arm;
        config.output_dir = base.output_dir.join("arms").join(arm.label());
        summaries.push(run_pipeline(&config)?);
    }
    let mut table = String::from(
        "arm,forecast_mape_pct,optimiser_iterations,co2_reduction_pct,hallucination_rate\n",
    );
    for summary in &summaries {
        table.push_str(&format!(
            "{},{},{},{},{}\n",
            summary.arm.label(),
            summary.forecast_mape_pct,
            summary.optimiser_iterations,
            summary.realized_co2_reduction_pct,
            summary.hallucination_rate,
        ));
    }
    fs::create_dir_all(&base.output_dir)?;
    fs::write(base.output_dir.join("ablation.csv"), table.as_bytes())?;
    Ok(summaries)
}
