//! Simulator for one-hit oracle circuits under a nonlinear driving
//! operator, with a repetition-based 3SAT decision procedure.
//!
//! The crate is organized around the pipeline's stages:
//!
//! - [`state`]: dense state-vector engine and the gate vocabulary,
//!   including the controlled phase inversion gate.
//! - [`nonlinear`]: the drive that pushes a qubit's superposition into
//!   |0>, in an exact single-step mode and an iterated smooth mode.
//! - [`cnf`]: DIMACS ingestion and the classical brute-force oracle used
//!   to cross-check every verdict.
//! - [`oracle`]: reversible synthesis of equality and 3SAT inverse
//!   oracles, with exhaustive gate-vs-truth-table verification.
//! - [`pipeline`]: state preparation, the phase stage, the drive, the
//!   measurement/repetition decision rule, and the analytic backend.
//! - [`report`]: JSON run reports.

pub mod cnf;
pub mod error;
pub mod nonlinear;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod state;

pub use error::{Error, Result};
