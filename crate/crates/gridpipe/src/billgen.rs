//! Auditable billing statements: a structured bill input holding every
//! display number pre-computed under one canonical rounding, a closed numeric
//! vocabulary, a pluggable statement generator, and an independent span-level
//! auditor. The generator never performs arithmetic.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::Write;

use rand::Rng;

use crate::corpus::TariffSchedule;
use crate::error::{Error, Result};
use crate::rng;

/// Round half away from zero at `decimals` places. `f64::round` has exactly
/// this tie behaviour on the scaled value.
pub fn round_fixed(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}

/// Canonical fixed-point rendering: '.' separator, no grouping, the exact
/// digit count for the field class.
pub fn format_fixed(value: f64, decimals: u32) -> String {
    let scale = 10i64.pow(decimals);
    let scaled = (value * scale as f64).round() as i64;
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    format!(
        "{sign}{}.{:0width$}",
        abs / scale,
        abs % scale,
        width = decimals as usize
    )
}

/// Decimal places for each field class: 2 for currency/kWh/kg, 1 for percent.
pub const AMOUNT_DECIMALS: u32 = 2;
pub const PERCENT_DECIMALS: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BillLine {
    pub block_index: usize,
    pub kwh: f64,
    pub rate: f64,
    pub charge: f64,
}

/// Every number a statement may display, already rounded canonically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BillInput {
    pub customer_id: String,
    /// Day range [start, end).
    pub period: (usize, usize),
    pub kwh_by_block: Vec<BillLine>,
    pub period_kwh: f64,
    pub subtotal: f64,
    pub tax: f64,
    pub total: f64,
    pub prev_period_kwh: f64,
    pub delta_kwh: f64,
    pub delta_pct: f64,
    pub co2_total_kg: f64,
    pub expected_kwh: f64,
}

/// Split a period total across increasing tariff blocks; always at least the
/// first block, zero-kWh tail blocks omitted.
fn decompose_blocks(period_kwh: f64, tariff: &TariffSchedule) -> Vec<BillLine> {
    let mut lines = Vec::new();
    let mut lower = 0.0;
    let mut remaining = period_kwh;
    for (index, (bound, rate)) in tariff.blocks.iter().enumerate() {
        let width = bound.map(|b| b - lower).unwrap_or(f64::INFINITY);
        let kwh = remaining.min(width);
        if kwh > 0.0 || index == 0 {
            let kwh = round_fixed(kwh, AMOUNT_DECIMALS);
            lines.push(BillLine {
                block_index: index,
                kwh,
                rate: *rate,
                charge: round_fixed(kwh * rate, AMOUNT_DECIMALS),
            });
        }
        remaining -= kwh;
        if let Some(b) = bound {
            lower = *b;
        }
        if remaining <= 0.0 {
            break;
        }
    }
    lines
}

/// Assemble the structured bill input for one customer-period. All display
/// values are rounded here, once, so downstream generation is arithmetic-free.
#[allow(clippy::too_many_arguments)]
pub fn assemble_bill_input(
    customer_id: &str,
    period: (usize, usize),
    readings: &[f64],
    intervals_per_day: usize,
    tariff: &TariffSchedule,
    prev_period_kwh_raw: f64,
    co2_total_kg: f64,
    expected_kwh: f64,
) -> Result<BillInput> {
    let (start, end) = period;
    if start >= end || end * intervals_per_day > readings.len() {
        return Err(Error::Domain(format!(
            "billing period [{start}, {end}) outside the metered range"
        )));
    }
    tariff.validate()?;
    let raw_kwh: f64 = readings[start * intervals_per_day..end * intervals_per_day]
        .iter()
        .sum();
    let period_kwh = round_fixed(raw_kwh, AMOUNT_DECIMALS);
    let kwh_by_block = decompose_blocks(period_kwh, tariff);
    let subtotal = round_fixed(
        kwh_by_block.iter().map(|l| l.charge).sum(),
        AMOUNT_DECIMALS,
    );
    let tax = round_fixed(subtotal * tariff.tax_rate, AMOUNT_DECIMALS);
    let total = round_fixed(subtotal + tax, AMOUNT_DECIMALS);
    let prev_period_kwh = round_fixed(prev_period_kwh_raw, AMOUNT_DECIMALS);
    // Delta from the raw totals, rounded once at the end.
    let delta_kwh = round_fixed(raw_kwh - prev_period_kwh_raw, AMOUNT_DECIMALS);
    let delta_pct = if prev_period_kwh_raw == 0.0 {
        0.0
    } else {
        round_fixed(
            100.0 * (raw_kwh - prev_period_kwh_raw) / prev_period_kwh_raw,
            PERCENT_DECIMALS,
        )
    };
    Ok(BillInput {
        customer_id: customer_id.to_string(),
        period,
        kwh_by_block,
        period_kwh,
        subtotal,
        tax,
        total,
        prev_period_kwh,
        delta_kwh,
        delta_pct,
        co2_total_kg: round_fixed(co2_total_kg, AMOUNT_DECIMALS),
        expected_kwh: round_fixed(expected_kwh, AMOUNT_DECIMALS),
    })
}

/// The field a numeric slot claims to display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldClaim {
    BlockKwh(usize),
    BlockRate(usize),
    BlockCharge(usize),
    PeriodKwh,
    Subtotal,
    Tax,
    Total,
    PrevPeriodKwh,
    DeltaKwh,
    DeltaPct,
    Co2TotalKg,
    ExpectedKwh,
}

impl FieldClaim {
    pub fn name(&self) -> String {
        match self {
            FieldClaim::BlockKwh(b) => format!("block_{b}_kwh"),
            FieldClaim::BlockRate(b) => format!("block_{b}_rate"),
            FieldClaim::BlockCharge(b) => format!("block_{b}_charge"),
            FieldClaim::PeriodKwh => "period_kwh".into(),
            FieldClaim::Subtotal => "subtotal".into(),
            FieldClaim::Tax => "tax".into(),
            FieldClaim::Total => "total".into(),
            FieldClaim::PrevPeriodKwh => "prev_period_kwh".into(),
            FieldClaim::DeltaKwh => "delta_kwh".into(),
            FieldClaim::DeltaPct => "delta_pct".into(),
            FieldClaim::Co2TotalKg => "co2_total_kg".into(),
            FieldClaim::ExpectedKwh => "expected_kwh".into(),
        }
    }

    pub fn decimals(&self) -> u32 {
        match self {
            FieldClaim::DeltaPct => PERCENT_DECIMALS,
            _ => AMOUNT_DECIMALS,
        }
    }

    fn value(&self, input: &BillInput) -> Result<f64> {
        let line = |b: &usize| {
            input
                .kwh_by_block
                .get(*b)
                .ok_or_else(|| Error::Generation(format!("missing block {b}")))
        };
        Ok(match self {
            FieldClaim::BlockKwh(b) => line(b)?.kwh,
            FieldClaim::BlockRate(b) => line(b)?.rate,
            FieldClaim::BlockCharge(b) => line(b)?.charge,
            FieldClaim::PeriodKwh => input.period_kwh,
            FieldClaim::Subtotal => input.subtotal,
            FieldClaim::Tax => input.tax,
            FieldClaim::Total => input.total,
            FieldClaim::PrevPeriodKwh => input.prev_period_kwh,
            FieldClaim::DeltaKwh => input.delta_kwh,
            FieldClaim::DeltaPct => input.delta_pct,
            FieldClaim::Co2TotalKg => input.co2_total_kg,
            FieldClaim::ExpectedKwh => input.expected_kwh,
        })
    }
}

/// Closed set of canonical renderings of every field and derived value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumericVocabulary {
    pub canonical_strings: BTreeSet<String>,
}

impl NumericVocabulary {
    pub fn contains(&self, s: &str) -> bool {
        self.canonical_strings.contains(s)
    }
}

pub fn numeric_vocabulary(input: &BillInput) -> NumericVocabulary {
    let mut canonical_strings = BTreeSet::new();
    let mut amount = |v: f64| {
        canonical_strings.insert(format_fixed(v, AMOUNT_DECIMALS));
    };
    for line in &input.kwh_by_block {
        amount(line.kwh);
        amount(line.rate);
        amount(line.charge);
    }
    amount(input.period_kwh);
    amount(input.subtotal);
    amount(input.tax);
    amount(input.total);
    amount(input.prev_period_kwh);
    amount(input.delta_kwh);
    amount(input.co2_total_kg);
    amount(input.expected_kwh);
    canonical_strings.insert(format_fixed(input.delta_pct, PERCENT_DECIMALS));
    NumericVocabulary { canonical_strings }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Policy {
    Constrained,
    /// Perturb one randomly chosen numeric slot by a seeded non-zero offset
    /// before rendering — the ablation's hallucination injector.
    UnconstrainedFaulty(u64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumericSpan {
    pub start: usize,
    pub end: usize,
    pub rendered: String,
    pub claim: FieldClaim,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BillStatement {
    pub customer_id: String,
    pub text: String,
    pub numeric_spans: Vec<NumericSpan>,
}

/// A generator backend turns pre-filled numeric slots into text plus span
/// positions. The policy and auditor apply to any backend.
pub trait GeneratorBackend {
    fn render(&self, input: &BillInput, slots: &[(FieldClaim, String)])
        -> Result<BillStatement>;
}

/// Deterministic fixed English template.
pub struct TemplateBackend;

impl GeneratorBackend for TemplateBackend {
    fn render(
        &self,
        input: &BillInput,
        slots: &[(FieldClaim, String)],
    ) -> Result<BillStatement> {
        let mut text = String::new();
        let mut spans = Vec::new();
        let mut slot_iter = slots.iter();
        let mut emit = |text: &mut String, spans: &mut Vec<NumericSpan>| -> Result<&str> {
            let (claim, rendered) = slot_iter
                .next()
                .ok_or_else(|| Error::Generation("template slot underrun".into()))?;
            spans.push(NumericSpan {
                start: text.len(),
                end: text.len() + rendered.len(),
                rendered: rendered.clone(),
                claim: *claim,
            });
            Ok(rendered)
        };

        text.push_str(&format!(
            "Electricity statement for customer {}\n",
            input.customer_id
        ));
        text.push_str(&format!(
            "Billing period: day {} to day {}\n\nUsage charges\n",
            input.period.0,
            input.period.1 - 1
        ));
        for line in &input.kwh_by_block {
            text.push_str(&format!("  Tier {}: ", line.block_index + 1));
            let kwh = emit(&mut text, &mut spans)?.to_string();
            text.push_str(&kwh);
            text.push_str(" kWh at ");
            let rate = emit(&mut text, &mut spans)?.to_string();
            text.push_str(&rate);
            text.push_str(" per kWh = ");
            let charge = emit(&mut text, &mut spans)?.to_string();
            text.push_str(&charge);
            text.push('\n');
        }
        text.push_str("Total consumption this period: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" kWh\nSubtotal: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str("\nTax: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str("\nAmount due: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str("\n\nPrevious period consumption: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" kWh\nChange from previous period: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" kWh (");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" %)\nEstimated carbon footprint: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" kg CO2\nForecast consumption for the next period: ");
        let v = emit(&mut text, &mut spans)?.to_string();
        text.push_str(&v);
        text.push_str(" kWh\n");
        if slot_iter.next().is_some() {
            return Err(Error::Generation("template slot overrun".into()));
        }
        Ok(BillStatement {
            customer_id: input.customer_id.clone(),
            text,
            numeric_spans: spans,
        })
    }
}

/// The ordered numeric slots of the default template.
fn template_slots(input: &BillInput) -> Result<Vec<(FieldClaim, String)>> {
    let mut claims = Vec::new();
    for line in &input.kwh_by_block {
        claims.push(FieldClaim::BlockKwh(line.block_index));
        claims.push(FieldClaim::BlockRate(line.block_index));
        claims.push(FieldClaim::BlockCharge(line.block_index));
    }
    claims.extend([
        FieldClaim::PeriodKwh,
        FieldClaim::Subtotal,
        FieldClaim::Tax,
        FieldClaim::Total,
        FieldClaim::PrevPeriodKwh,
        FieldClaim::DeltaKwh,
        FieldClaim::DeltaPct,
        FieldClaim::Co2TotalKg,
        FieldClaim::ExpectedKwh,
    ]);
    claims
        .into_iter()
        .map(|claim| {
            let value = claim.value(input)?;
            Ok((claim, format_fixed(value, claim.decimals())))
        })
        .collect()
}

pub fn generate_statement(
    input: &BillInput,
    policy: Policy,
    backend: &dyn GeneratorBackend,
) -> Result<BillStatement> {
    let mut slots = template_slots(input)?;
    if let Policy::UnconstrainedFaulty(seed) = policy {
        let vocabulary = numeric_vocabulary(input);
        let mut rng = rng::stream(seed, "bill-fault", 0);
        let slot = rng.gen_range(0..slots.len());
        let (claim, _) = slots[slot];
        let value = claim.value(input)?;
        // Seeded non-zero offset; retry until the rendering leaves the
        // vocabulary (offsets may collide with another field's string).
        loop {
            let offset = (rng.gen_range(1..=500) as f64 / 100.0)
                * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let rendered = format_fixed(value + offset, claim.decimals());
            if !vocabulary.contains(&rendered) {
                slots[slot].1 = rendered;
                break;
            }
        }
    }
    backend.render(input, &slots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mismatch {
    pub span: (usize, usize),
    pub expected_field: String,
    pub found: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub verdict: Verdict,
    pub mismatches: Vec<Mismatch>,
}

/// Independent rendering path for the auditor: decimal-string rounding, half
/// away from zero, no shared code with `format_fixed`.
fn audit_render(value: f64, decimals: usize) -> String {
    let long = format!("{value:.*}", decimals + 6);
    let (head, tail) = long.split_once('.').expect("fixed formatting has a point");
    let mut digits: Vec<u8> = head
        .trim_start_matches('-')
        .bytes()
        .chain(tail.bytes())
        .map(|b| b - b'0')
        .collect();
    let int_len = head.trim_start_matches('-').len();
    let keep = int_len + decimals;
    let round_up = digits[keep] >= 5;
    digits.truncate(keep);
    if round_up {
        let mut i = keep;
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let int_len = digits.len() - decimals;
    let mut out = String::new();
    if head.starts_with('-') && digits.iter().any(|&d| d != 0) {
        out.push('-');
    }
    let int_part: String = digits[..int_len].iter().map(|d| (d + b'0') as char).collect();
    let int_part = int_part.trim_start_matches('0');
    out.push_str(if int_part.is_empty() { "0" } else { int_part });
    out.push('.');
    out.extend(digits[int_len..].iter().map(|d| (d + b'0') as char));
    out
}

/// Scan text for decimal numeric tokens (digits '.' digits, optional sign).
/// Returns byte ranges and the matched strings.
fn scan_decimals(text: &str) -> Vec<(usize, usize, String)> {
    let bytes = text.as_bytes();
    let mut found = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = if bytes[i] == b'-'
            && i + 1 < bytes.len()
            && bytes[i + 1].is_ascii_digit()
        {
            i
        } else if bytes[i].is_ascii_digit() {
            i
        } else {
            i += 1;
            continue;
        };
        let mut j = if bytes[start] == b'-' { start + 1 } else { start };
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j < bytes.len()
            && bytes[j] == b'.'
            && j + 1 < bytes.len()
            && bytes[j + 1].is_ascii_digit()
        {
            j += 1;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            found.push((start, j, text[start..j].to_string()));
        }
        i = j.max(start + 1);
    }
    found
}

/// Verify a statement against its bill input: every decimal token in the
/// text must belong to the vocabulary, and every claimed slot must carry the
/// auditor's own rendering of the claimed field.
pub fn audit_statement(statement: &BillStatement, input: &BillInput) -> AuditReport {
    let vocabulary = numeric_vocabulary(input);
    let mut mismatches = Vec::new();
    for (start, end, token) in scan_decimals(&statement.text) {
        if !vocabulary.contains(&token) {
            mismatches.push(Mismatch {
                span: (start, end),
                expected_field: "vocabulary".into(),
                found: token,
            });
        }
    }
    for span in &statement.numeric_spans {
        let found = statement
            .text
            .get(span.start..span.end)
            .unwrap_or("")
            .to_string();
        let expected = match span.claim.value(input) {
            Ok(v) => audit_render(v, span.claim.decimals() as usize),
            Err(_) => String::new(),
        };
        if found != expected {
            mismatches.push(Mismatch {
                span: (span.start, span.end),
                expected_field: span.claim.name(),
                found,
            });
        }
    }
    AuditReport {
        verdict: if mismatches.is_empty() { Verdict::Pass } else { Verdict::Fail },
        mismatches,
    }
}

/// Fraction of statements whose audit fails.
pub fn hallucination_rate(panel: &[(BillStatement, BillInput)]) -> Result<f64> {
    if panel.is_empty() {
        return Err(Error::Domain("empty statement panel".into()));
    }
    let failures = panel
        .iter()
        .filter(|(s, i)| audit_statement(s, i).verdict == Verdict::Fail)
        .count();
    Ok(failures as f64 / panel.len() as f64)
}

/// `policy,panel_size,hallucination_rate` CSV.
pub fn export_panel_csv<W: Write>(
    rows: &[(&str, usize, f64)],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["policy", "panel_size", "hallucination_rate"])?;
    for (policy, size, rate) in rows {
        w.write_record([*policy, &size.to_string(), &rate.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tariff() -> TariffSchedule {
        TariffSchedule::default()
    }

    fn input_for_kwh(kwh: f64, prev: f64) -> BillInput {
        let readings = vec![kwh / 96.0; 96];
        assemble_bill_input("C0001", (0, 1), &readings, 96, &tariff(), prev, 12.345, 118.0)
            .unwrap()
    }

    #[test]
    fn formatter_cases() {
        assert_eq!(format_fixed(13.6, 2), "13.60");
        assert_eq!(format_fixed(0.125, 2), "0.13"); // half away from zero
        assert_eq!(format_fixed(-0.125, 2), "-0.13");
        assert_eq!(format_fixed(0.0, 2), "0.00");
        assert_eq!(format_fixed(2.25, 1), "2.3");
        assert_eq!(format_fixed(1234.5, 2), "1234.50");
    }

    #[test]
    fn audit_render_matches_canonical_formatter() {
        for &v in &[13.6, 0.125, -0.125, 0.0, 99.995, 1234.5678, 0.004, -0.004] {
            for d in [1u32, 2] {
                assert_eq!(
                    audit_render(v, d as usize),
                    format_fixed(v, d),
                    "value {v} at {d} decimals"
                );
            }
        }
    }

    #[test]
    fn tariff_block_arithmetic_example() {
        let input = input_for_kwh(120.0, 0.0);
        assert_eq!(input.kwh_by_block.len(), 2);
        assert_eq!(format_fixed(input.kwh_by_block[0].kwh, 2), "100.00");
        assert_eq!(format_fixed(input.kwh_by_block[0].charge, 2), "10.00");
        assert_eq!(format_fixed(input.kwh_by_block[1].kwh, 2), "20.00");
        assert_eq!(format_fixed(input.kwh_by_block[1].charge, 2), "3.60");
        assert_eq!(format_fixed(input.subtotal, 2), "13.60");
        assert_eq!(format_fixed(input.tax, 2), "0.68");
        assert_eq!(format_fixed(input.total, 2), "14.28");
    }

    #[test]
    fn equal_periods_have_zero_delta() {
        let input = input_for_kwh(150.0, 150.0);
        assert_eq!(format_fixed(input.delta_kwh, 2), "0.00");
        assert_eq!(format_fixed(input.delta_pct, 1), "0.0");
    }

    #[test]
    fn zero_consumption_yields_zero_charges() {
        let input = input_for_kwh(0.0, 0.0);
        assert_eq!(input.kwh_by_block.len(), 1);
        assert_eq!(format_fixed(input.kwh_by_block[0].charge, 2), "0.00");
        assert_eq!(format_fixed(input.total, 2), "0.00");
        assert_eq!(input.delta_pct, 0.0);
        let vocab = numeric_vocabulary(&input);
        assert!(vocab.contains("0.00"));
    }

    #[test]
    fn vocabulary_contains_the_example_strings() {
        let input = input_for_kwh(120.0, 0.0);
        let vocab = numeric_vocabulary(&input);
        for s in ["120.00", "10.00", "3.60", "13.60", "0.68", "14.28"] {
            assert!(vocab.contains(s), "vocabulary should contain {s}");
        }
        // Set semantics: repeated values collapse.
        let n_before = vocab.canonical_strings.len();
        let vocab2 = numeric_vocabulary(&input);
        assert_eq!(vocab2.canonical_strings.len(), n_before);
    }

    #[test]
    fn constrained_statement_passes_audit() {
        for kwh in [0.0, 37.5, 120.0, 450.0] {
            let input = input_for_kwh(kwh, 110.0);
            let statement =
                generate_statement(&input, Policy::Constrained, &TemplateBackend).unwrap();
            let vocab = numeric_vocabulary(&input);
            for span in &statement.numeric_spans {
                assert!(vocab.contains(&span.rendered));
                assert_eq!(&statement.text[span.start..span.end], span.rendered);
            }
            let report = audit_statement(&statement, &input);
            assert_eq!(report.verdict, Verdict::Pass, "kwh {kwh}: {report:?}");
        }
    }

    #[test]
    fn faulty_statement_fails_with_one_injected_span() {
        let input = input_for_kwh(120.0, 100.0);
        let vocab = numeric_vocabulary(&input);
        let statement =
            generate_statement(&input, Policy::UnconstrainedFaulty(7), &TemplateBackend)
                .unwrap();
        let out_of_vocab: Vec<_> = statement
            .numeric_spans
            .iter()
            .filter(|s| !vocab.contains(&s.rendered))
            .collect();
        assert_eq!(out_of_vocab.len(), 1);
        let report = audit_statement(&statement, &input);
        assert_eq!(report.verdict, Verdict::Fail);
        let perturbed_field = out_of_vocab[0].claim.name();
        assert!(report
            .mismatches
            .iter()
            .any(|m| m.expected_field == perturbed_field));
    }

    #[test]
    fn generation_is_deterministic() {
        let input = input_for_kwh(200.0, 150.0);
        for policy in [Policy::Constrained, Policy::UnconstrainedFaulty(9)] {
            let a = generate_statement(&input, policy, &TemplateBackend).unwrap();
            let b = generate_statement(&input, policy, &TemplateBackend).unwrap();
            assert_eq!(a.text, b.text);
        }
    }

    #[test]
    fn single_digit_mutations_always_fail() {
        let input = input_for_kwh(120.0, 100.0);
        let statement =
            generate_statement(&input, Policy::Constrained, &TemplateBackend).unwrap();
        for span in &statement.numeric_spans {
            for pos in span.start..span.end {
                let b = statement.text.as_bytes()[pos];
                if !b.is_ascii_digit() {
                    continue;
                }
                let flipped = if b == b'9' { b'0' } else { b + 1 };
                let mut text = statement.text.clone().into_bytes();
                text[pos] = flipped;
                let mutated = BillStatement {
                    customer_id: statement.customer_id.clone(),
                    text: String::from_utf8(text).unwrap(),
                    numeric_spans: statement.numeric_spans.clone(),
                };
                let report = audit_statement(&mutated, &input);
                assert_eq!(
                    report.verdict,
                    Verdict::Fail,
                    "mutation at byte {pos} in span {:?} went undetected",
                    span.claim
                );
            }
        }
    }

    #[test]
    fn hallucination_rate_counting() {
        let input = input_for_kwh(120.0, 100.0);
        let good =
            generate_statement(&input, Policy::Constrained, &TemplateBackend).unwrap();
        let bad =
            generate_statement(&input, Policy::UnconstrainedFaulty(3), &TemplateBackend)
                .unwrap();
        let all_good: Vec<_> =
            (0..30).map(|_| (good.clone(), input.clone())).collect();
        assert_eq!(hallucination_rate(&all_good).unwrap(), 0.0);
        let all_bad: Vec<_> = (0..30).map(|_| (bad.clone(), input.clone())).collect();
        assert_eq!(hallucination_rate(&all_bad).unwrap(), 1.0);
        let mixed: Vec<_> = (0..15)
            .map(|_| (good.clone(), input.clone()))
            .chain((0..15).map(|_| (bad.clone(), input.clone())))
            .collect();
        assert_eq!(hallucination_rate(&mixed).unwrap(), 0.5);
        assert!(hallucination_rate(&[]).is_err());
    }

    #[test]
    fn period_outside_range_rejected() {
        let readings = vec![1.0; 96];
        assert!(assemble_bill_input(
            "C0001",
            (0, 2),
            &readings,
            96,
            &tariff(),
            0.0,
            0.0,
            0.0
        )
        .is_err());
    }
}
