//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A register, wire budget, or enumeration exceeds its declared cap.
    #[error("{what}: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("a register must hold at least one qubit")]
    EmptyRegister,

    /// Gate wiring is inconsistent: repeated indices, out-of-range indices,
    /// or an arity that does not match the gate kind.
    #[error("bad wiring: {0}")]
    BadWiring(String),

    /// Total destructive interference: the state collapsed to (numerically)
    /// zero, e.g. when driving an oracle with no accepted inputs.
    #[error("degenerate cancellation: remaining norm {norm:.3e} is below tolerance")]
    DegenerateCancellation { norm: f64 },

    /// The iterated drive did not reach the residual tolerance within its
    /// step budget; the merge strength is too small for the tolerance.
    #[error("drive budget exhausted after {steps} steps, residual {residual:.3e}")]
    BudgetExhausted { steps: usize, residual: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An internal guarantee of the construction was violated. This always
    /// signals a simulator bug, never bad user input.
    #[error("integrity violation: {0}")]
    Integrity(String),

    /// The oracle rejects every input, so the outcome distribution is empty.
    #[error("oracle has no accepted inputs (no zeros)")]
    NoZeros,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
