//! Deterministic smart-meter analytics pipeline: synthetic corpus generation,
//! day-ahead quantile load forecasting, auditable CO2 attribution,
//! simulated-bifurcation demand-response optimisation, and constrained,
//! audited bill-statement generation.

pub mod billgen;
pub mod carbon;
pub mod corpus;
pub mod error;
pub mod forecast;
pub mod pipeline;
pub mod qubo;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
