//! Dense state-vector engine.
//!
//! A [`StateVector`] holds one complex amplitude per basis state of a qubit
//! register. Bit `k` of an amplitude index (least significant bit = qubit 0)
//! holds the value of qubit `k`. Gates are applied by bit-indexed loops over
//! the amplitude array; no gate matrices are materialized except for the
//! 8x8 controlled-phase-inversion listing, which is exposed for inspection.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest dense register: 2^28 amplitudes (~4 GiB of complex doubles).
pub const DENSE_QUBIT_CAP: usize = 28;

/// Public norm tolerance: every state returned by a public operation has
/// a squared norm within this of 1.
pub const NORM_TOL: f64 = 1e-9;

/// Below this norm a renormalization is treated as total destructive
/// interference.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Gate vocabulary. `Cpi` is the three-wire controlled phase inversion:
/// wires are ordered (f, u, i); the sign of the amplitude flips exactly
/// when f and u are both 1, while i passes through untouched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GateKind {
    X,
    H,
    Cnot,
    Ccx,
    Mcx,
    Cz,
    Cpi,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Ccx => "CCX",
            GateKind::Mcx => "MCX",
            GateKind::Cz => "CZ",
            GateKind::Cpi => "CPI",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "X" => Some(GateKind::X),
            "H" => Some(GateKind::H),
            "CNOT" => Some(GateKind::Cnot),
            "CCX" => Some(GateKind::Ccx),
            "MCX" => Some(GateKind::Mcx),
            "CZ" => Some(GateKind::Cz),
            "CPI" => Some(GateKind::Cpi),
            _ => None,
        }
    }

    /// True for gates that permute basis states (the classical-reversible
    /// subset an oracle circuit is allowed to use).
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cnot | GateKind::Ccx | GateKind::Mcx
        )
    }
}

/// One gate application. For multi-wire kinds the target is the last index:
/// `CNOT c t`, `CCX c1 c2 t`, `MCX c1 .. ck t`. For `CPI` the order is
/// `f u i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn x(q: usize) -> Self {
        GateOp { kind: GateKind::X, qubits: vec![q] }
    }

    pub fn h(q: usize) -> Self {
        GateOp { kind: GateKind::H, qubits: vec![q] }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp { kind: GateKind::Cnot, qubits: vec![control, target] }
    }

    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        GateOp { kind: GateKind::Ccx, qubits: vec![c1, c2, target] }
    }

    pub fn mcx(controls: &[usize], target: usize) -> Self {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        GateOp { kind: GateKind::Mcx, qubits }
    }

    /// Multi-controlled X emitted as the smallest kind that fits:
    /// CNOT for one control, CCX for two, MCX otherwise.
    pub fn controlled_x(controls: &[usize], target: usize) -> Self {
        match controls.len() {
            1 => GateOp::cnot(controls[0], target),
            2 => GateOp::ccx(controls[0], controls[1], target),
            _ => GateOp::mcx(controls, target),
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        GateOp { kind: GateKind::Cz, qubits: vec![a, b] }
    }

    pub fn cpi(f: usize, u: usize, i: usize) -> Self {
        GateOp { kind: GateKind::Cpi, qubits: vec![f, u, i] }
    }

    /// Check arity, distinctness, and range against a register size.
    pub fn validate(&self, qubit_count: usize) -> Result<()> {
        let arity_ok = match self.kind {
            GateKind::X | GateKind::H => self.qubits.len() == 1,
            GateKind::Cnot | GateKind::Cz => self.qubits.len() == 2,
            GateKind::Ccx | GateKind::Cpi => self.qubits.len() == 3,
            GateKind::Mcx => self.qubits.len() >= 2,
        };
        if !arity_ok {
            return Err(Error::BadWiring(format!(
                "{} takes a different wire count, got {}",
                self.kind.name(),
                self.qubits.len()
            )));
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= qubit_count {
                return Err(Error::BadWiring(format!(
                    "wire {q} out of range for a {qubit_count}-qubit register"
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::BadWiring(format!(
                    "wire {q} repeated in {}",
                    self.kind.name()
                )));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register size.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub qubit_count: usize,
    pub ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit { qubit_count, ops: Vec::new() }
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.qubit_count)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    /// The mirror image. Every kind in the vocabulary is an involution, so
    /// reversing the op list inverts the circuit.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            ops: self.ops.iter().rev().cloned().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Spread `i` so the bits at and above position `q` shift left by one,
/// leaving a 0 at position `q`.
#[inline]
fn insert_zero_bit(i: usize, q: usize) -> usize {
    let low = i & ((1usize << q) - 1);
    ((i >> q) << (q + 1)) | low
}

/// The 8x8 controlled-phase-inversion matrix in the |f u i> basis ordering
/// with f the most significant bit: diag(1,1,1,1,1,1,-1,-1).
pub fn cpi_matrix() -> [[Complex64; 8]; 8] {
    let mut m = [[Complex64::new(0.0, 0.0); 8]; 8];
    for (k, row) in m.iter_mut().enumerate() {
        let sign = if k >= 6 { -1.0 } else { 1.0 };
        row[k] = Complex64::new(sign, 0.0);
    }
    m
}

#[derive(Clone, Debug)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All amplitude mass on |0...0>.
    pub fn new(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::EmptyRegister);
        }
        if qubit_count > DENSE_QUBIT_CAP {
            return Err(Error::CapExceeded {
                what: "dense register qubits",
                requested: qubit_count,
                cap: DENSE_QUBIT_CAP,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubit_count];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits: qubit_count, amps })
    }

    pub fn from_amplitudes(qubit_count: usize, amps: Vec<Complex64>) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::EmptyRegister);
        }
        if amps.len() != 1usize << qubit_count {
            return Err(Error::BadWiring(format!(
                "expected {} amplitudes for {} qubits, got {}",
                1usize << qubit_count,
                qubit_count,
                amps.len()
            )));
        }
        Ok(StateVector { qubits: qubit_count, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scale back to unit norm, reporting the prior norm. Fails with
    /// `DegenerateCancellation` when the state has (numerically) vanished.
    pub fn renormalize(&mut self) -> Result<f64> {
        let prior = self.norm();
        if prior <= DEGENERACY_TOL {
            return Err(Error::DegenerateCancellation { norm: prior });
        }
        let inv = 1.0 / prior;
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(prior)
    }

    /// Apply one gate by a bit-indexed loop over the affected subspace.
    /// Each amplitude pair is touched exactly once, so the update order is
    /// immaterial and results are bit-identical across runs.
    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.qubits)?;
        match op.kind {
            GateKind::X => {
                let q = op.qubits[0];
                let mask = 1usize << q;
                for i in 0..self.amps.len() / 2 {
                    let k = insert_zero_bit(i, q);
                    self.amps.swap(k, k | mask);
                }
            }
            GateKind::H => {
                let q = op.qubits[0];
                let mask = 1usize << q;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() / 2 {
                    let k = insert_zero_bit(i, q);
                    let a = self.amps[k];
                    let b = self.amps[k | mask];
                    self.amps[k] = (a + b) * s;
                    self.amps[k | mask] = (a - b) * s;
                }
            }
            GateKind::Cnot | GateKind::Ccx | GateKind::Mcx => {
                let (controls, target) = op.qubits.split_at(op.qubits.len() - 1);
                let cmask: usize = controls.iter().map(|&q| 1usize << q).sum();
                let q = target[0];
                let tmask = 1usize << q;
                for i in 0..self.amps.len() / 2 {
                    let k = insert_zero_bit(i, q);
                    if k & cmask == cmask {
                        self.amps.swap(k, k | tmask);
                    }
                }
            }
            GateKind::Cz | GateKind::Cpi => {
                // Sign flip when both control wires are 1; for CPI the
                // third wire passes through untouched.
                let (mut a, mut b) = (op.qubits[0], op.qubits[1]);
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                let set = (1usize << a) | (1usize << b);
                for i in 0..self.amps.len() / 4 {
                    let k = insert_zero_bit(insert_zero_bit(i, a), b) | set;
                    self.amps[k] = -self.amps[k];
                }
            }
        }
        Ok(())
    }

    pub fn run_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.qubit_count != self.qubits {
            return Err(Error::BadWiring(format!(
                "circuit is wired for {} qubits, state has {}",
                circuit.qubit_count, self.qubits
            )));
        }
        for op in &circuit.ops {
            self.apply_gate(op)?;
        }
        Ok(())
    }

    /// Probability mass consistent with a partial assignment of qubits.
    pub fn probability_of(&self, constraints: &[(usize, bool)]) -> f64 {
        let mut mask = 0usize;
        let mut want = 0usize;
        for &(q, bit) in constraints {
            assert!(q < self.qubits, "constraint qubit {q} out of range");
            mask |= 1 << q;
            if bit {
                want |= 1 << q;
            }
        }
        self.amps
            .iter()
            .enumerate()
            .filter(|(k, _)| k & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Draw one full-register outcome from |a_k|^2. Deterministic given the
    /// seed; the cumulative walk is single-threaded.
    pub fn sample_measurement(&self, seed: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut last_nonzero = 0u64;
        for (k, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = k as u64;
                cumulative += p;
                if r < cumulative {
                    return k as u64;
                }
            }
        }
        // Rounding left the cumulative a hair under r.
        last_nonzero
    }
}

/// Render a basis index as a ket bitstring, most significant qubit first
/// (so index 5 over 3 qubits reads "101").
pub fn basis_label(index: u64, qubit_count: usize) -> String {
    (0..qubit_count)
        .rev()
        .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`basis_label`].
pub fn parse_basis_label(label: &str) -> Result<u64> {
    let mut index = 0u64;
    for ch in label.chars() {
        index = (index << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid bit '{ch}' in bitstring"),
                    })
                }
            };
    }
    Ok(index)
}
