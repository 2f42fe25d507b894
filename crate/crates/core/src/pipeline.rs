//! The full decision pipelines.
//!
//! One-hit procedure: prepare N maximally entangled pairs (e1, e2) plus N
//! unentangled qubits u in uniform superposition; compute the inverse
//! oracle on e1; apply one controlled phase inversion per input qubit
//! (oracle output and u_k control, e2_k passing through); uncompute the
//! oracle; nonlinearly drive every u qubit to |0>. Incorrect branches
//! cancel and the e2 register lands on the accepted input.
//!
//! 3SAT procedure: the same machinery over the formula's oracle with the
//! extra bit t. The final distribution is uniform over the S satisfying
//! assignments (t = 0) plus the single all-ones/t = 1 outcome, so each
//! trial sees t = 0 with probability S/(S+1). Repeating M times decides
//! satisfiability: any t = 0 proves SAT outright, all-ones histories give
//! UNSAT with confidence 1 - 2^(-M).
//!
//! Three interchangeable backends: `Dense` simulates every wire including
//! oracle ancillas, `Structured` tracks only the 2^(2N) table over (e, u)
//! pairs justified by the e1 = e2 support invariant, and `Analytic`
//! enumerates the oracle's zeros without simulating.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cnf::{eval_formula, Assignment, CnfFormula};
use crate::error::{Error, Result};
use crate::nonlinear::{drive_register, DriveStats, NonlinearConfig};
use crate::oracle::{
    synth_equality_inverse_oracle, synth_sat_inverse_oracle, OneHitSpec, OracleProgram,
    TruthFunction,
};
use crate::state::{basis_label, Circuit, GateOp, StateVector, DENSE_QUBIT_CAP};

/// Enumeration cap for the analytic backend (2^24 oracle rows).
pub const ANALYTIC_BIT_CAP: usize = 24;

/// Width cap for the dense global unitary (512 x 512 at N = 3).
pub const UNITARY_N_CAP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dense,
    Structured,
    Analytic,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Dense => write!(f, "dense"),
            Backend::Structured => write!(f, "structured"),
            Backend::Analytic => write!(f, "analytic"),
        }
    }
}

/// Wire assignment for a dense pipeline run: e1 in the low block, then e2,
/// then u, then the oracle output, then oracle ancillas.
#[derive(Clone, Debug)]
pub struct RegisterLayout {
    pub n: usize,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub u: Vec<usize>,
    pub oracle_out: usize,
    pub oracle_ancillas: Vec<usize>,
}

impl RegisterLayout {
    pub fn for_oracle(program: &OracleProgram) -> Result<Self> {
        let n = program.input_wires.len();
        let ancillas = program.ancilla_wires.len();
        let total = 3 * n + 1 + ancillas;
        if total > DENSE_QUBIT_CAP {
            return Err(Error::CapExceeded {
                what: "dense pipeline wires",
                requested: total,
                cap: DENSE_QUBIT_CAP,
            });
        }
        Ok(RegisterLayout {
            n,
            e1: (0..n).collect(),
            e2: (n..2 * n).collect(),
            u: (2 * n..3 * n).collect(),
            oracle_out: 3 * n,
            oracle_ancillas: (3 * n + 1..total).collect(),
        })
    }

    pub fn total_wires(&self) -> usize {
        3 * self.n + 1 + self.oracle_ancillas.len()
    }

    /// e2 value of a full-register basis index.
    pub fn e2_value(&self, index: u64) -> u64 {
        (index >> self.n) & ((1u64 << self.n) - 1)
    }
}

/// H on each e1_k then CNOT onto e2_k, H on each u_k: amplitude 1/2^N on
/// exactly the basis states with e1 = e2 and any u, ancillas clear.
pub fn prepare_input_state(layout: &RegisterLayout) -> Result<StateVector> {
    let mut state = StateVector::new(layout.total_wires())?;
    for k in 0..layout.n {
        state.apply_gate(&GateOp::h(layout.e1[k]))?;
        state.apply_gate(&GateOp::cnot(layout.e1[k], layout.e2[k]))?;
    }
    for k in 0..layout.n {
        state.apply_gate(&GateOp::h(layout.u[k]))?;
    }
    Ok(state)
}

fn remap_program_circuit(program: &OracleProgram, layout: &RegisterLayout) -> Result<Circuit> {
    if program.input_wires.len() != layout.n
        || program.ancilla_wires.len() != layout.oracle_ancillas.len()
    {
        return Err(Error::BadWiring(
            "oracle program does not match the register layout".into(),
        ));
    }
    let mut map = vec![usize::MAX; program.wire_count()];
    for (k, &w) in program.input_wires.iter().enumerate() {
        map[w] = layout.e1[k];
    }
    map[program.output_wire] = layout.oracle_out;
    for (j, &w) in program.ancilla_wires.iter().enumerate() {
        map[w] = layout.oracle_ancillas[j];
    }

    let mut circuit = Circuit::new(layout.total_wires());
    for op in &program.circuit.ops {
        let qubits: Vec<usize> = op.qubits.iter().map(|&q| map[q]).collect();
        if qubits.contains(&usize::MAX) {
            return Err(Error::BadWiring("oracle gate touches an unmapped wire".into()));
        }
        circuit.push(GateOp { kind: op.kind, qubits })?;
    }
    Ok(circuit)
}

/// Oracle compute, one CPI per input qubit on (oracle_out, u_k, e2_k), then
/// the mirror uncompute. Net effect on a basis state (e1, e2, u): the
/// amplitude picks up (-1)^(f(e1) * popcount(u)); output and ancillas are
/// restored.
pub fn apply_oracle_phase_stage(
    state: &mut StateVector,
    program: &OracleProgram,
    layout: &RegisterLayout,
) -> Result<()> {
    let compute = remap_program_circuit(program, layout)?;
    state.run_circuit(&compute)?;
    for k in 0..layout.n {
        state.apply_gate(&GateOp::cpi(layout.oracle_out, layout.u[k], layout.e2[k]))?;
    }
    state.run_circuit(&compute.reversed())?;
    Ok(())
}

/// Probability that any e1 bit disagrees with its e2 partner.
pub fn e1_e2_mismatch_probability(state: &StateVector, layout: &RegisterLayout) -> f64 {
    let n = layout.n;
    let mask = (1u64 << n) - 1;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let k = *k as u64;
            (k & mask) != (k >> n & mask)
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// The diagonal 2^(3N) x 2^(3N) operator of the whole phase stage over the
/// logical wires (e1, e2, u): +1 when e1 equals the target, otherwise
/// (-1)^parity(u), with parity the N-way xor of the u bits.
#[derive(Clone, Debug)]
pub struct GlobalUnitary {
    pub n: usize,
    pub dim: usize,
    entries: Vec<Complex64>,
}

impl GlobalUnitary {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.entry(k, k).re).collect()
    }

    /// Operator infinity norm of U^dagger U - I, computed densely.
    pub fn unitarity_residual(&self) -> f64 {
        let dim = self.dim;
        let mut worst = 0.0f64;
        for i in 0..dim {
            let mut row_sum = 0.0;
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                if i == j {
                    acc -= Complex64::new(1.0, 0.0);
                }
                row_sum += acc.norm();
            }
            worst = worst.max(row_sum);
        }
        worst
    }
}

pub fn build_global_unitary(spec: &OneHitSpec) -> Result<GlobalUnitary> {
    if spec.n > UNITARY_N_CAP {
        return Err(Error::CapExceeded {
            what: "global unitary input width",
            requested: spec.n,
            cap: UNITARY_N_CAP,
        });
    }
    let n = spec.n;
    let dim = 1usize << (3 * n);
    let mask = (1u64 << n) - 1;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for k in 0..dim {
        let e1 = k as u64 & mask;
        let u = (k as u64 >> (2 * n)) & mask;
        let negate = e1 != spec.target && u.count_ones() & 1 == 1;
        entries[k * dim + k] = Complex64::new(if negate { -1.0 } else { 1.0 }, 0.0);
    }
    Ok(GlobalUnitary { n, dim, entries })
}

/// Gate-level diagonal of the phase stage, measured by running every
/// logical basis state (ancillas clear) through the real circuit.
pub fn phase_stage_diagonal(spec: &OneHitSpec) -> Result<Vec<Complex64>> {
    let program = synth_equality_inverse_oracle(*spec);
    let layout = RegisterLayout::for_oracle(&program)?;
    let wires = layout.total_wires();
    let logical = 1usize << (3 * layout.n);
    let mut diagonal = Vec::with_capacity(logical);
    for k in 0..logical {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << wires];
        amps[k] = Complex64::new(1.0, 0.0);
        let mut state = StateVector::from_amplitudes(wires, amps)?;
        apply_oracle_phase_stage(&mut state, &program, &layout)?;
        let entry = state.amplitude(k);
        if (entry.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Integrity(format!(
                "phase stage is not diagonal at basis index {k}"
            )));
        }
        diagonal.push(entry);
    }
    Ok(diagonal)
}

/// Enumerated oracle outcome: the final measurement distribution is
/// uniform over the inputs the oracle accepts.
#[derive(Clone, Debug)]
pub struct AnalyticOutcome {
    /// (e2 value, probability), ascending by value.
    pub distribution: Vec<(u64, f64)>,
    pub zeros: Vec<u64>,
}

pub fn analytic_outcome(truth: &TruthFunction) -> Result<AnalyticOutcome> {
    let bits = truth.input_bits();
    if bits > ANALYTIC_BIT_CAP {
        return Err(Error::CapExceeded {
            what: "analytic enumeration bits",
            requested: bits,
            cap: ANALYTIC_BIT_CAP,
        });
    }
    let zeros = truth.zeros();
    if zeros.is_empty() {
        return Err(Error::NoZeros);
    }
    let p = 1.0 / zeros.len() as f64;
    Ok(AnalyticOutcome {
        distribution: zeros.iter().map(|&z| (z, p)).collect(),
        zeros,
    })
}

/// Result of one full one-hit run.
#[derive(Clone, Debug)]
pub struct OneHitResult {
    /// e2 outcome probabilities keyed by bitstring, most significant qubit
    /// first. Sums to 1 within 1e-9.
    pub e2_distribution: BTreeMap<String, f64>,
    /// Mass on the target bitstring.
    pub success_probability: f64,
    pub drive_stats: Vec<DriveStats>,
    pub backend: Backend,
}

/// Final distribution over e2 values plus the drive bookkeeping, shared by
/// the one-hit and 3SAT drivers.
struct FinalDistribution {
    n: usize,
    support: Vec<(u64, f64)>,
    drive_stats: Vec<DriveStats>,
}

const SUPPORT_FLOOR: f64 = 1e-15;

fn dense_final(
    program: &OracleProgram,
    nl: &NonlinearConfig,
) -> Result<FinalDistribution> {
    let layout = RegisterLayout::for_oracle(program)?;
    let mut state = prepare_input_state(&layout)?;
    apply_oracle_phase_stage(&mut state, program, &layout)?;
    let drive_stats = drive_register(&mut state, &layout.u, nl)?;

    let n = layout.n;
    let mut mass = vec![0.0f64; 1 << n];
    for (k, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            mass[layout.e2_value(k as u64) as usize] += p;
        }
    }
    let support = mass
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > SUPPORT_FLOOR)
        .map(|(v, &p)| (v as u64, p))
        .collect();
    Ok(FinalDistribution { n, support, drive_stats })
}

fn structured_final(truth: &TruthFunction, nl: &NonlinearConfig) -> Result<FinalDistribution> {
    let n = truth.input_bits();
    if 2 * n > DENSE_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "structured table qubits",
            requested: 2 * n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let e_dim = 1usize << n;
    let amp = Complex64::new(1.0 / e_dim as f64, 0.0);
    let mut amps = vec![amp; e_dim * e_dim];

    // Diagonal law of the phase stage on the (e, u) table.
    let f: Vec<bool> = (0..e_dim as u64).map(|e| truth.eval(e)).collect();
    for (idx, a) in amps.iter_mut().enumerate() {
        let e = idx & (e_dim - 1);
        let u = idx >> n;
        if f[e] && u.count_ones() & 1 == 1 {
            *a = -*a;
        }
    }

    let mut state = StateVector::from_amplitudes(2 * n, amps)?;
    let u_qubits: Vec<usize> = (n..2 * n).collect();
    let drive_stats = drive_register(&mut state, &u_qubits, nl)?;

    let mut mass = vec![0.0f64; e_dim];
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            mass[idx & (e_dim - 1)] += p;
        }
    }
    let support = mass
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > SUPPORT_FLOOR)
        .map(|(v, &p)| (v as u64, p))
        .collect();
    Ok(FinalDistribution { n, support, drive_stats })
}

fn analytic_final(truth: &TruthFunction) -> Result<FinalDistribution> {
    let outcome = analytic_outcome(truth)?;
    Ok(FinalDistribution {
        n: truth.input_bits(),
        support: outcome.distribution,
        drive_stats: Vec::new(),
    })
}

fn final_distribution(
    truth: &TruthFunction,
    program: Option<&OracleProgram>,
    nl: &NonlinearConfig,
    backend: Backend,
) -> Result<FinalDistribution> {
    match backend {
        Backend::Dense => {
            let built;
            let program = match program {
                Some(p) => p,
                None => {
                    built = match truth {
                        TruthFunction::Equality(spec) => synth_equality_inverse_oracle(*spec),
                        TruthFunction::Sat(formula) => synth_sat_inverse_oracle(formula),
                    };
                    &built
                }
            };
            dense_final(program, nl)
        }
        Backend::Structured => structured_final(truth, nl),
        Backend::Analytic => analytic_final(truth),
    }
}

/// Full one-hit run: prepare, phase stage, drive, exact e2 readout.
pub fn run_onehit(
    spec: &OneHitSpec,
    nl: &NonlinearConfig,
    backend: Backend,
) -> Result<OneHitResult> {
    let truth = TruthFunction::Equality(*spec);
    let fin = final_distribution(&truth, None, nl, backend)?;
    let mut e2_distribution = BTreeMap::new();
    let mut success = 0.0;
    for &(v, p) in &fin.support {
        if v == spec.target {
            success = p;
        }
        e2_distribution.insert(basis_label(v, fin.n), p);
    }
    Ok(OneHitResult {
        e2_distribution,
        success_probability: success,
        drive_stats: fin.drive_stats,
        backend,
    })
}

/// Stage-by-stage dense states for inspection (the CLI trace).
pub struct OneHitTrace {
    pub layout: RegisterLayout,
    pub prepared: StateVector,
    pub post_phase: StateVector,
    pub post_drive: StateVector,
    pub result: OneHitResult,
}

pub fn onehit_trace(spec: &OneHitSpec, nl: &NonlinearConfig) -> Result<OneHitTrace> {
    let program = synth_equality_inverse_oracle(*spec);
    let layout = RegisterLayout::for_oracle(&program)?;
    let prepared = prepare_input_state(&layout)?;
    let mut state = prepared.clone();
    apply_oracle_phase_stage(&mut state, &program, &layout)?;
    let post_phase = state.clone();
    drive_register(&mut state, &layout.u, nl)?;
    let post_drive = state;
    let result = run_onehit(spec, nl, Backend::Dense)?;
    Ok(OneHitTrace {
        layout,
        prepared,
        post_phase,
        post_drive,
        result,
    })
}

/// splitmix64 finalizer; decorrelates per-trial seeds from the run seed.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for trial `trial` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial.wrapping_add(1)))
}

/// A prepared 3SAT pipeline: the deterministic final distribution is built
/// once, trials sample it with per-trial seeds.
pub struct SatPipeline {
    formula: CnfFormula,
    backend: Backend,
    support: Vec<(u64, f64)>,
    drive_stats: Vec<DriveStats>,
    zeros_count: Option<u64>,
}

impl SatPipeline {
    pub fn new(formula: &CnfFormula, nl: &NonlinearConfig, backend: Backend) -> Result<Self> {
        let truth = TruthFunction::Sat(formula.clone());
        let fin = final_distribution(&truth, None, nl, backend)?;
        let zeros_count = match backend {
            // The all-ones/t=1 zero is always accepted, so satisfying
            // assignments number one less than the support.
            Backend::Analytic => Some(fin.support.len() as u64 - 1),
            _ => None,
        };
        Ok(SatPipeline {
            formula: formula.clone(),
            backend,
            support: fin.support,
            drive_stats: fin.drive_stats,
            zeros_count,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn drive_stats(&self) -> &[DriveStats] {
        &self.drive_stats
    }

    pub fn zeros_count(&self) -> Option<u64> {
        self.zeros_count
    }

    /// Final e2 outcome distribution as (value, probability) pairs,
    /// ascending by value.
    pub fn support(&self) -> &[(u64, f64)] {
        &self.support
    }

    /// Exact extra-qubit statistics from the final amplitudes.
    pub fn probability_t_zero(&self) -> f64 {
        let n = self.formula.var_count();
        self.support
            .iter()
            .filter(|&&(v, _)| v >> n & 1 == 0)
            .map(|&(_, p)| p)
            .sum()
    }

    /// One measurement of the e2 register, split into (t, x). When t = 0
    /// the construction guarantees x satisfies the formula; anything else
    /// is a simulator bug.
    pub fn trial(&self, seed: u64) -> Result<(bool, Assignment)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut outcome = self.support.last().map(|&(v, _)| v).unwrap_or(0);
        for &(v, p) in &self.support {
            cumulative += p;
            if r < cumulative {
                outcome = v;
                break;
            }
        }
        let n = self.formula.var_count();
        let t = outcome >> n & 1 == 1;
        let x = Assignment::from_index(n, outcome & ((1u64 << n) - 1));
        if !t && !eval_formula(&self.formula, &x) {
            return Err(Error::Integrity(format!(
                "measured t=0 with non-satisfying assignment {x}"
            )));
        }
        Ok((t, x))
    }
}

/// One full pipeline run and measurement.
pub fn run_sat_trial(
    formula: &CnfFormula,
    nl: &NonlinearConfig,
    seed: u64,
    backend: Backend,
) -> Result<(bool, Assignment)> {
    SatPipeline::new(formula, nl, backend)?.trial(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat => write!(f, "SAT"),
            Verdict::Unsat => write!(f, "UNSAT"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SatVerdict {
    pub verdict: Verdict,
    pub witness: Option<Assignment>,
    /// 1 for SAT; 1 - 2^(-M) for UNSAT.
    pub confidence: f64,
    /// Requested repetition count M.
    pub trials: usize,
    /// Extra-qubit outcomes actually observed (short on early exit).
    pub t_history: Vec<u8>,
    /// Number of satisfying assignments, when the backend enumerated them.
    pub zeros_count: Option<u64>,
}

/// Repeat the pipeline up to M times, stopping early at the first t = 0.
pub fn solve_sat(
    formula: &CnfFormula,
    reps: usize,
    nl: &NonlinearConfig,
    seed: u64,
    backend: Backend,
) -> Result<SatVerdict> {
    if reps == 0 {
        return Err(Error::BadWiring("repetition count must be at least 1".into()));
    }
    let pipeline = SatPipeline::new(formula, nl, backend)?;
    let mut t_history = Vec::new();
    for trial in 0..reps {
        let (t, x) = pipeline.trial(derive_seed(seed, trial as u64))?;
        t_history.push(t as u8);
        if !t {
            return Ok(SatVerdict {
                verdict: Verdict::Sat,
                witness: Some(x),
                confidence: 1.0,
                trials: reps,
                t_history,
                zeros_count: pipeline.zeros_count(),
            });
        }
    }
    Ok(SatVerdict {
        verdict: Verdict::Unsat,
        witness: None,
        confidence: 1.0 - 0.5f64.powi(reps as i32),
        trials: reps,
        t_history,
        zeros_count: pipeline.zeros_count(),
    })
}
