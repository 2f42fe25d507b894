//! Structured run reports, serialized as a single JSON object.
//!
//! Field order is fixed by the struct; identical runs serialize to
//! byte-identical documents except for `wall_time_ms`, the one field a
//! comparison should exclude.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cnf::{emit_dimacs, CnfFormula};
use crate::nonlinear::NonlinearConfig;
use crate::pipeline::{Backend, SatVerdict};

pub const REPORT_SCHEMA: u32 = 1;

/// SHA-256 of the canonical DIMACS emission, hex encoded.
pub fn formula_hash(formula: &CnfFormula) -> String {
    hex::encode(Sha256::digest(emit_dimacs(formula).as_bytes()))
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_hash: Option<String>,
    pub backend: Backend,
    pub nonlinear: NonlinearConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_history: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeros_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_probability: Option<f64>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn for_solve(
        formula: &CnfFormula,
        verdict: &SatVerdict,
        backend: Backend,
        nonlinear: NonlinearConfig,
        seed: u64,
        wall_time_ms: f64,
    ) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            command: "solve".into(),
            formula_hash: Some(formula_hash(formula)),
            backend,
            nonlinear,
            reps: Some(verdict.trials),
            seed: Some(seed),
            t_history: Some(verdict.t_history.clone()),
            verdict: Some(verdict.verdict.to_string()),
            witness: verdict.witness.as_ref().map(|w| w.to_string()),
            confidence: Some(verdict.confidence),
            zeros_count: verdict.zeros_count,
            target: None,
            success_probability: None,
            wall_time_ms,
        }
    }

    pub fn for_onehit(
        target: &str,
        success_probability: f64,
        backend: Backend,
        nonlinear: NonlinearConfig,
        wall_time_ms: f64,
    ) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            command: "onehit".into(),
            formula_hash: None,
            backend,
            nonlinear,
            reps: None,
            seed: None,
            t_history: None,
            verdict: None,
            witness: None,
            confidence: None,
            zeros_count: None,
            target: Some(target.to_string()),
            success_probability: Some(success_probability),
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
