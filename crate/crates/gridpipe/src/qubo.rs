//! Demand-response decision encoding: per-customer shift invitations as a
//! QUBO, and the exact QUBO <-> Ising correspondence used by the solvers.

use serde::{Deserialize, Serialize};

use crate::corpus::{Archetype, CustomerProfile, HOURS_PER_DAY};
use crate::error::{Error, Result};
use crate::forecast::QuantileForecast;

/// One candidate load shift for one customer: move the expected kWh of a
/// high-CI hour into a low-CI hour.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftCandidate {
    pub customer_id: String,
    pub from_hour: usize,
    pub to_hour: usize,
    pub expected_kwh: f64,
    pub worst_case_kwh: f64,
    pub co2_saved_kg: f64,
    pub discomfort: f64,
}

/// Symmetric binary quadratic objective, row-major dense matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuboInstance {
    pub n: usize,
    pub q: Vec<f64>,
    pub candidates: Vec<ShiftCandidate>,
}

#[derive(Debug, Clone)]
pub struct IsingModel {
    pub n: usize,
    /// Symmetric couplings with zero diagonal.
    pub couplings: Vec<f64>,
    pub fields: Vec<f64>,
    pub offset: f64,
}

/// Demand-response encoding parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DrConfig {
    /// Shadow price per kg CO2 saved.
    pub shadow_price: f64,
    /// Discomfort cost per archetype (Low, Mid, Heavy).
    pub discomfort: [f64; 3],
    /// Headroom cap as a fraction of the aggregate q50 at the to-hour.
    pub headroom_fraction: f64,
    /// Conflict penalty weight as a multiple of the mean diagonal magnitude.
    pub penalty_scale: f64,
    /// Test-day offset of the canonical instance (0 = first test day).
    pub instance_day: usize,
}

impl Default for DrConfig {
    fn default() -> Self {
        Self {
            shadow_price: 50.0,
            discomfort: [0.5, 1.0, 2.0],
            headroom_fraction: 0.3,
            penalty_scale: 1.0,
            instance_day: 7,
        }
    }
}

impl DrConfig {
    pub fn discomfort_for(&self, archetype: Archetype) -> f64 {
        match archetype {
            Archetype::Low => self.discomfort[0],
            Archetype::Mid => self.discomfort[1],
            Archetype::Heavy => self.discomfort[2],
        }
    }
}

impl QuboInstance {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    pub fn validate(&self) -> Result<()> {
        if self.q.len() != self.n * self.n {
            return Err(Error::Domain("Q matrix size mismatch".into()));
        }
        if !self.candidates.is_empty() && self.candidates.len() != self.n {
            return Err(Error::Domain("candidate list misaligned with Q".into()));
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.at(i, j) - self.at(j, i)).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "Q not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_dense(q: Vec<Vec<f64>>) -> Result<Self> {
        let n = q.len();
        let flat: Vec<f64> = q.into_iter().flatten().collect();
        let instance = Self { n, q: flat, candidates: Vec::new() };
        instance.validate()?;
        Ok(instance)
    }
}

/// Build the demand-response QUBO for one day: one candidate per customer
/// (its max-saving hour pair), negated benefit on the diagonal, and a soft
/// worst-case headroom penalty between candidates sharing a to-hour.
pub fn build_dr_qubo(
    profiles: &[CustomerProfile],
    forecasts: &[QuantileForecast],
    ci_day: &[f64; HOURS_PER_DAY],
    config: &DrConfig,
    headroom_reference: Option<&[f64; HOURS_PER_DAY]>,
) -> Result<QuboInstance> {
    if profiles.len() != forecasts.len() {
        return Err(Error::Domain("profiles and forecasts misaligned".into()));
    }
    if config.headroom_fraction <= 0.0 {
        return Err(Error::Config("headroom_fraction must be positive".into()));
    }

    // Hourly reference profile behind the headroom caps: an externally
    // supplied aggregate (e.g. the historical mean day) or, absent one, the
    // aggregate q50 of the supplied forecasts.
    let mut aggregate_q50 = [0.0_f64; HOURS_PER_DAY];
    for forecast in forecasts {
        for h in 0..HOURS_PER_DAY {
            aggregate_q50[h] += forecast.q50[h];
        }
    }
    let cap_profile = headroom_reference.unwrap_or(&aggregate_q50);

    let mut candidates = Vec::new();
    for (profile, forecast) in profiles.iter().zip(forecasts) {
        let mut best: Option<ShiftCandidate> = None;
        for from in 0..HOURS_PER_DAY {
            let expected = forecast.q50[from];
            if expected <= 0.0 {
                continue;
            }
            for to in 0..HOURS_PER_DAY {
                if to == from || ci_day[from] <= ci_day[to] {
                    continue;
                }
                let saved = expected * (ci_day[from] - ci_day[to]) / 1000.0;
                if saved <= 0.0 {
                    continue;
                }
                if best.as_ref().map_or(true, |b| saved > b.co2_saved_kg) {
                    best = Some(ShiftCandidate {
                        customer_id: profile.customer_id.clone(),
                        from_hour: from,
                        to_hour: to,
                        expected_kwh: expected,
                        worst_case_kwh: forecast.q90[from],
                        co2_saved_kg: saved,
                        discomfort: config.discomfort_for(profile.archetype),
                    });
                }
            }
        }
        if let Some(candidate) = best {
            candidates.push(candidate);
        }
    }
    if candidates.is_empty() {
        return Err(Error::Domain("no profitable shift candidates".into()));
    }

    let n = candidates.len();
    let mut q = vec![0.0; n * n];
    let mut diag_sum = 0.0;
    for (i, candidate) in candidates.iter().enumerate() {
        let benefit = config.shadow_price * candidate.co2_saved_kg - candidate.discomfort;
        q[i * n + i] = -benefit;
        diag_sum += benefit.abs();
    }
    let rho_pen = config.penalty_scale * diag_sum / n as f64;
    for i in 0..n {
        for j in (i + 1)..n {
            if candidates[i].to_hour != candidates[j].to_hour {
                continue;
            }
            let cap = config.headroom_fraction * cap_profile[candidates[i].to_hour];
            if cap <= 0.0 {
                return Err(Error::Config("non-positive headroom cap".into()));
            }
            let penalty =
                rho_pen * candidates[i].worst_case_kwh * candidates[j].worst_case_kwh
                    / (cap * cap);
            // Half on each triangle so the quadratic form carries the full
            // penalty once.
            q[i * n + j] = penalty / 2.0;
            q[j * n + i] = penalty / 2.0;
        }
    }

    let instance = QuboInstance { n, q, candidates };
    instance.validate()?;
    Ok(instance)
}

/// Exact quadratic form x^T Q x over a binary assignment.
pub fn qubo_energy(instance: &QuboInstance, x: &[u8]) -> Result<f64> {
    if x.len() != instance.n {
        return Err(Error::Domain(format!(
            "assignment length {} != n {}",
            x.len(),
            instance.n
        )));
    }
    if x.iter().any(|&b| b > 1) {
        return Err(Error::Domain("assignment entries must be binary".into()));
    }
    let mut energy = 0.0;
    for i in 0..instance.n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..instance.n {
            if x[j] == 1 {
                energy += instance.at(i, j);
            }
        }
    }
    Ok(energy)
}

/// Map x = (s+1)/2 into spin space: J = Q/4 off-diagonal, h = row sums / 2,
/// offset chosen so energies match exactly on every assignment.
pub fn qubo_to_ising(instance: &QuboInstance) -> IsingModel {
    let n = instance.n;
    let mut couplings = vec![0.0; n * n];
    let mut fields = vec![0.0; n];
    let mut total = 0.0;
    let mut trace = 0.0;
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            let qij = instance.at(i, j);
            row_sum += qij;
            total += qij;
            if i == j {
                trace += qij;
            } else {
                couplings[i * n + j] = qij / 4.0;
            }
        }
        fields[i] = row_sum / 2.0;
    }
    IsingModel { n, couplings, fields, offset: total / 4.0 + trace / 4.0 }
}

impl IsingModel {
    /// Energy at (possibly continuous) positions, including the offset.
    pub fn energy(&self, s: &[f64]) -> f64 {
        let n = self.n;
        let mut e = self.offset;
        for i in 0..n {
            e += self.fields[i] * s[i];
            for j in 0..n {
                e += self.couplings[i * n + j] * s[i] * s[j];
            }
        }
        e
    }

    /// dE/ds_i = 2 sum_j J_ij s_j + h_i.
    pub fn gradient(&self, s: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut g = self.fields[i];
            for j in 0..n {
                g += 2.0 * self.couplings[i * n + j] * s[j];
            }
            out[i] = g;
        }
    }
}

/// s_i > 0 maps to 1, else 0.
pub fn spins_to_bits(s: &[f64]) -> Vec<u8> {
    s.iter().map(|&v| u8::from(v > 0.0)).collect()
}
