//! The nonlinear driving operator.
//!
//! Driving a qubit deterministically pushes its superposition into |0>
//! without disturbing the logical content of the other qubits. Writing the
//! state as psi = |0>_q (x) psi0 + |1>_q (x) psi1, the ideal drive replaces
//! it with the renormalization of |0>_q (x) (psi0 + psi1): amplitudes that
//! agree reinforce, amplitudes that disagree cancel. The iterated mode
//! approaches the same limit through repeated partial merges
//!
//! ```text
//! psi0 <- psi0 + eta * psi1,   psi1 <- (1 - eta) * psi1
//! ```
//!
//! renormalizing after each step, with eta = sin(epsilon) tied to the
//! rotation offset of the smooth scheme. Both modes are fixed functions of
//! (psi0, psi1): a global phase passes through and a global sign flip is
//! treated identically, so anything that cancels before the drive still
//! cancels after it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{StateVector, DEGENERACY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveMode {
    Ideal,
    Iterated,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NonlinearConfig {
    pub mode: DriveMode,
    /// Rotation offset in radians, in (0, pi/4). Ignored in ideal mode.
    pub epsilon: f64,
    /// Per-step merge strength in (0, 1], sin(epsilon) by default.
    pub eta: f64,
    pub max_steps: usize,
    pub residual_tol: f64,
}

impl NonlinearConfig {
    pub fn ideal() -> Self {
        NonlinearConfig {
            mode: DriveMode::Ideal,
            epsilon: 0.1,
            eta: (0.1f64).sin(),
            max_steps: 10_000,
            residual_tol: 1e-10,
        }
    }

    pub fn iterated(epsilon: f64) -> Self {
        NonlinearConfig {
            mode: DriveMode::Iterated,
            epsilon,
            eta: epsilon.sin(),
            max_steps: 10_000,
            residual_tol: 1e-10,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_tolerance(mut self, residual_tol: f64) -> Self {
        self.residual_tol = residual_tol;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.residual_tol <= 0.0 {
            return Err(Error::BadWiring(format!(
                "residual tolerance must be positive, got {}",
                self.residual_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::BadWiring("max_steps must be at least 1".into()));
        }
        if self.mode == DriveMode::Iterated {
            if !(self.epsilon > 0.0 && self.epsilon < std::f64::consts::FRAC_PI_4) {
                return Err(Error::BadWiring(format!(
                    "epsilon must lie in (0, pi/4), got {}",
                    self.epsilon
                )));
            }
            if !(self.eta > 0.0 && self.eta <= 1.0) {
                return Err(Error::BadWiring(format!(
                    "eta must lie in (0, 1], got {}",
                    self.eta
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DriveStats {
    pub steps_used: usize,
    pub final_residual: f64,
    /// Norm of the merged state just before the closing renormalization.
    pub prior_norm: f64,
}

/// Norm of the qubit-=1 component of the normalized state: the distance
/// left to the |0> eigenstate.
pub fn residual(state: &StateVector, qubit: usize) -> f64 {
    assert!(qubit < state.qubit_count(), "qubit {qubit} out of range");
    let mask = 1usize << qubit;
    let one_mass: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| k & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let total: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    (one_mass / total).sqrt()
}

fn merged_norm(state: &StateVector, mask: usize) -> f64 {
    let amps = state.amplitudes();
    let mut n2 = 0.0;
    for k in 0..amps.len() {
        if k & mask == 0 {
            n2 += (amps[k] + amps[k | mask]).norm_sqr();
        }
    }
    n2.sqrt()
}

fn one_block_is_zero(state: &StateVector, mask: usize) -> bool {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .all(|(k, a)| k & mask == 0 || a.norm_sqr() == 0.0)
}

/// Single-step drive: merge psi1 into psi0 outright and renormalize.
/// Exact no-op (zero steps) when the qubit is already an eigenstate.
pub fn drive_ideal(state: &mut StateVector, qubit: usize) -> Result<DriveStats> {
    assert!(qubit < state.qubit_count(), "qubit {qubit} out of range");
    let mask = 1usize << qubit;

    if one_block_is_zero(state, mask) {
        return Ok(DriveStats {
            steps_used: 0,
            final_residual: 0.0,
            prior_norm: state.norm(),
        });
    }

    let prior = merged_norm(state, mask);
    if prior <= DEGENERACY_TOL {
        return Err(Error::DegenerateCancellation { norm: prior });
    }

    let inv = 1.0 / prior;
    let amps = state.amplitudes_mut();
    for k in 0..amps.len() {
        if k & mask == 0 {
            amps[k] = (amps[k] + amps[k | mask]) * inv;
            amps[k | mask] = num_complex::Complex64::new(0.0, 0.0);
        }
    }

    Ok(DriveStats {
        steps_used: 1,
        final_residual: 0.0,
        prior_norm: prior,
    })
}

/// Iterated drive: repeat the partial merge until the residual falls below
/// the tolerance (or the step budget runs out), then project the remaining
/// psi1 mass away and renormalize. On `BudgetExhausted` the state is left
/// normalized but mid-iteration.
pub fn drive_iterated(
    state: &mut StateVector,
    qubit: usize,
    config: &NonlinearConfig,
) -> Result<DriveStats> {
    assert!(qubit < state.qubit_count(), "qubit {qubit} out of range");
    config.validate()?;
    let mask = 1usize << qubit;
    let eta = config.eta;

    let r0 = residual(state, qubit);
    if r0 <= config.residual_tol {
        return Ok(DriveStats {
            steps_used: 0,
            final_residual: r0,
            prior_norm: state.norm(),
        });
    }

    if merged_norm(state, mask) <= DEGENERACY_TOL {
        return Err(Error::DegenerateCancellation {
            norm: merged_norm(state, mask),
        });
    }

    let mut steps = 0;
    let mut r = r0;
    while steps < config.max_steps {
        steps += 1;
        {
            let amps = state.amplitudes_mut();
            for k in 0..amps.len() {
                if k & mask == 0 {
                    let b = amps[k | mask];
                    amps[k] += b * eta;
                    amps[k | mask] = b * (1.0 - eta);
                }
            }
        }
        state.renormalize()?;
        r = residual(state, qubit);
        if r <= config.residual_tol {
            break;
        }
    }
    if r > config.residual_tol {
        return Err(Error::BudgetExhausted { steps, residual: r });
    }

    // Project the leftover psi1 mass away; what remains is within
    // O(residual_tol) of the ideal merge direction.
    for (k, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if k & mask != 0 {
            *a = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    let prior = state.renormalize()?;

    Ok(DriveStats {
        steps_used: steps,
        final_residual: r,
        prior_norm: prior,
    })
}

/// Dispatch on the configured mode.
pub fn drive(state: &mut StateVector, qubit: usize, config: &NonlinearConfig) -> Result<DriveStats> {
    match config.mode {
        DriveMode::Ideal => drive_ideal(state, qubit),
        DriveMode::Iterated => drive_iterated(state, qubit, config),
    }
}

/// Drive each listed qubit in ascending index order. The merges act on
/// disjoint index partitions, so the order is immaterial up to rounding;
/// fixing it keeps runs reproducible.
pub fn drive_register(
    state: &mut StateVector,
    qubits: &[usize],
    config: &NonlinearConfig,
) -> Result<Vec<DriveStats>> {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadWiring("drive qubits must be distinct".into()));
    }
    sorted
        .into_iter()
        .map(|q| drive(state, q, config))
        .collect()
}
