//! Reversible synthesis of inverse oracle functions.
//!
//! An inverse oracle answers 0 exactly on accepted inputs and 1 otherwise.
//! Programs compute that answer into a dedicated output wire using only
//! classical-reversible gates (X, CNOT, CCX, MCX) arranged as mirror-image
//! compute/uncompute halves around the output write, so every internal wire
//! ends the run exactly where it started.
//!
//! Two oracle families are synthesized: the equality oracle (0 only on one
//! target bitstring) and the 3SAT oracle, which takes the formula's inputs
//! plus one extra bit t and answers NOT(phi(x)) when t = 0 and NOT(AND(x))
//! when t = 1.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cnf::{eval_formula, Assignment, CnfFormula};
use crate::error::{Error, Result};
use crate::state::{basis_label, Circuit, GateKind, GateOp};

/// Exhaustive verification budget: 2^20 basis rows.
pub const VERIFY_WIRE_CAP: usize = 20;

/// Equality (one-hit) oracle shape: accepted input is the n-bit `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OneHitSpec {
    pub n: usize,
    pub target: u64,
}

impl OneHitSpec {
    pub fn new(n: usize, target: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        if n < 64 && target >> n != 0 {
            return Err(Error::BadWiring(format!(
                "target {target:#b} does not fit in {n} bits"
            )));
        }
        Ok(OneHitSpec { n, target })
    }

    /// Parse a target bitstring (most significant bit first).
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let n = bits.len();
        let target = crate::state::parse_basis_label(bits)?;
        OneHitSpec::new(n, target)
    }

    pub fn target_label(&self) -> String {
        basis_label(self.target, self.n)
    }
}

/// The mathematical f : {0,1}^N -> {0,1} behind a program, evaluated
/// directly from its defining spec or formula. This is the fast backend
/// and the reference every gate network is verified against.
#[derive(Clone, Debug)]
pub enum TruthFunction {
    Equality(OneHitSpec),
    Sat(CnfFormula),
}

impl TruthFunction {
    pub fn input_bits(&self) -> usize {
        match self {
            TruthFunction::Equality(spec) => spec.n,
            TruthFunction::Sat(formula) => formula.var_count() + 1,
        }
    }

    pub fn eval(&self, input: u64) -> bool {
        match self {
            TruthFunction::Equality(spec) => input != spec.target,
            TruthFunction::Sat(formula) => {
                let n = formula.var_count();
                let x = input & ((1u64 << n) - 1);
                let t = input >> n & 1 == 1;
                if t {
                    // 0 exactly when every other input is 1.
                    x != (1u64 << n) - 1
                } else {
                    !eval_formula(formula, &Assignment::from_index(n, x))
                }
            }
        }
    }

    /// All inputs where the function answers 0 (the accepted set).
    pub fn zeros(&self) -> Vec<u64> {
        let bits = self.input_bits();
        (0..1u64 << bits).filter(|&e| !self.eval(e)).collect()
    }
}

/// A reversible gate network computing an inverse oracle into `output_wire`.
/// Wires are numbered inputs first, then the output, then ancillas.
#[derive(Clone, Debug)]
pub struct OracleProgram {
    pub circuit: Circuit,
    pub input_wires: Vec<usize>,
    pub output_wire: usize,
    pub ancilla_wires: Vec<usize>,
    pub truth: TruthFunction,
    pub description: String,
}

impl OracleProgram {
    pub fn wire_count(&self) -> usize {
        self.circuit.qubit_count
    }
}

/// The reference accessor for the functional side of a program.
pub fn truth_function(program: &OracleProgram) -> &TruthFunction {
    &program.truth
}

/// Equality oracle: X on the inputs where the target has a 0, a
/// multi-controlled X onto the output, X on the output, then the input
/// conjugation undone. Output holds 0 exactly on the target.
pub fn synth_equality_inverse_oracle(spec: OneHitSpec) -> OracleProgram {
    let n = spec.n;
    let output = n;
    let mut circuit = Circuit::new(n + 1);
    let inputs: Vec<usize> = (0..n).collect();

    let conjugated: Vec<usize> = (0..n).filter(|&k| spec.target >> k & 1 == 0).collect();
    for &k in &conjugated {
        circuit.push(GateOp::x(k)).unwrap();
    }
    circuit.push(GateOp::controlled_x(&inputs, output)).unwrap();
    circuit.push(GateOp::x(output)).unwrap();
    for &k in conjugated.iter().rev() {
        circuit.push(GateOp::x(k)).unwrap();
    }

    OracleProgram {
        circuit,
        input_wires: inputs,
        output_wire: output,
        ancilla_wires: Vec::new(),
        truth: TruthFunction::Equality(spec),
        description: format!("equality inverse oracle, n={n}, target={}", spec.target_label()),
    }
}

/// Gates computing one clause's OR into `target`, via De Morgan: conjugate
/// the positive-literal wires, AND the conjugated values, invert. A clause
/// containing a variable in both polarities is constantly true and compiles
/// to a single X on the target.
fn clause_or_ops(clause: &[i32], target: usize) -> Vec<GateOp> {
    let mut polarity: BTreeMap<usize, (bool, bool)> = BTreeMap::new();
    for &lit in clause {
        let wire = lit.unsigned_abs() as usize - 1;
        let entry = polarity.entry(wire).or_insert((false, false));
        if lit > 0 {
            entry.0 = true;
        } else {
            entry.1 = true;
        }
    }
    if polarity.values().any(|&(pos, neg)| pos && neg) {
        return vec![GateOp::x(target)];
    }

    let controls: Vec<usize> = polarity.keys().copied().collect();
    let conjugated: Vec<usize> = polarity
        .iter()
        .filter(|(_, &(pos, _))| pos)
        .map(|(&w, _)| w)
        .collect();

    let mut ops = Vec::new();
    for &w in &conjugated {
        ops.push(GateOp::x(w));
    }
    ops.push(GateOp::controlled_x(&controls, target));
    ops.push(GateOp::x(target));
    for &w in conjugated.iter().rev() {
        ops.push(GateOp::x(w));
    }
    ops
}

/// 3SAT inverse oracle over n+1 inputs (x wires then the extra bit t).
/// Structure: per-clause ORs into clause ancillas, an AND over the clause
/// wires into a phi ancilla, an AND over the x wires into a second ancilla,
/// a t-controlled multiplexer onto the output, then the full uncompute of
/// the internal wires.
pub fn synth_sat_inverse_oracle(formula: &CnfFormula) -> OracleProgram {
    let n = formula.var_count();
    let m = formula.clause_count();
    let t_wire = n;
    let output = n + 1;
    let clause_base = n + 2;
    let phi_wire = clause_base + m;
    let and_wire = phi_wire + 1;
    let wires = and_wire + 1;

    let mut compute: Vec<GateOp> = Vec::new();
    for (j, clause) in formula.clauses().iter().enumerate() {
        compute.extend(clause_or_ops(clause, clause_base + j));
    }
    let clause_wires: Vec<usize> = (clause_base..clause_base + m).collect();
    compute.push(GateOp::controlled_x(&clause_wires, phi_wire));
    let x_wires: Vec<usize> = (0..n).collect();
    compute.push(GateOp::controlled_x(&x_wires, and_wire));

    // out <- 1 ^ (!t & phi) ^ (t & AND(x)) = t==0 ? !phi : !AND(x)
    let mux = [
        GateOp::x(t_wire),
        GateOp::ccx(t_wire, phi_wire, output),
        GateOp::x(t_wire),
        GateOp::ccx(t_wire, and_wire, output),
        GateOp::x(output),
    ];

    let mut circuit = Circuit::new(wires);
    circuit.extend(compute.iter().cloned()).unwrap();
    circuit.extend(mux.iter().cloned()).unwrap();
    circuit.extend(compute.iter().rev().cloned()).unwrap();

    let mut input_wires: Vec<usize> = (0..n).collect();
    input_wires.push(t_wire);
    let mut ancilla_wires = clause_wires;
    ancilla_wires.push(phi_wire);
    ancilla_wires.push(and_wire);

    OracleProgram {
        circuit,
        input_wires,
        output_wire: output,
        ancilla_wires,
        truth: TruthFunction::Sat(formula.clone()),
        description: format!("3SAT inverse oracle, {n} variables, {m} clauses"),
    }
}

/// Walk one basis state through a classical-reversible circuit.
pub fn apply_classical(circuit: &Circuit, mut basis: u64) -> Result<u64> {
    for op in &circuit.ops {
        if !op.kind.is_classical() {
            return Err(Error::Integrity(format!(
                "{} gate in a classical-reversible evaluation",
                op.kind.name()
            )));
        }
        match op.kind {
            GateKind::X => basis ^= 1u64 << op.qubits[0],
            _ => {
                let (controls, target) = op.qubits.split_at(op.qubits.len() - 1);
                let cmask: u64 = controls.iter().map(|&q| 1u64 << q).sum();
                if basis & cmask == cmask {
                    basis ^= 1u64 << target[0];
                }
            }
        }
    }
    Ok(basis)
}

#[derive(Clone, Debug)]
pub struct VerifyViolation {
    pub input_state: u64,
    pub message: String,
}

/// Outcome of exhaustively simulating a program on every basis state.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub wires: usize,
    pub rows_checked: u64,
    pub bijective: bool,
    pub violation_count: u64,
    /// First violations encountered, capped to keep reports readable.
    pub violations: Vec<VerifyViolation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.bijective
    }
}

const VIOLATION_SAMPLE_CAP: usize = 64;

/// Run the circuit on every basis state. Rows with all ancillas clear must
/// see the output wire toggled by exactly f(input); every row must leave
/// all non-output wires untouched (the mirror discipline restores internal
/// wires from any starting value); and the whole map must be a bijection.
pub fn verify_synthesis(program: &OracleProgram) -> Result<VerifyReport> {
    let wires = program.wire_count();
    if wires > VERIFY_WIRE_CAP {
        return Err(Error::CapExceeded {
            what: "verification wires",
            requested: wires,
            cap: VERIFY_WIRE_CAP,
        });
    }
    let rows = 1u64 << wires;
    let out_mask = 1u64 << program.output_wire;
    let anc_mask: u64 = program.ancilla_wires.iter().map(|&w| 1u64 << w).sum();

    let mut seen = vec![false; rows as usize];
    let mut violation_count = 0u64;
    let mut violations = Vec::new();
    let record = |state: u64, message: String, count: &mut u64, list: &mut Vec<VerifyViolation>| {
        *count += 1;
        if list.len() < VIOLATION_SAMPLE_CAP {
            list.push(VerifyViolation { input_state: state, message });
        }
    };

    for s in 0..rows {
        let r = apply_classical(&program.circuit, s)?;
        seen[r as usize] = true;

        if (s ^ r) & !out_mask != 0 {
            record(
                s,
                format!(
                    "non-output wires changed: {} -> {}",
                    basis_label(s, wires),
                    basis_label(r, wires)
                ),
                &mut violation_count,
                &mut violations,
            );
            continue;
        }
        if s & anc_mask == 0 {
            let mut input = 0u64;
            for (k, &w) in program.input_wires.iter().enumerate() {
                input |= (s >> w & 1) << k;
            }
            let expected = (s >> program.output_wire & 1 == 1) ^ program.truth.eval(input);
            let got = r >> program.output_wire & 1 == 1;
            if got != expected {
                record(
                    s,
                    format!(
                        "output wire holds {} but f({}) xor start is {}",
                        got as u8,
                        basis_label(input, program.input_wires.len()),
                        expected as u8
                    ),
                    &mut violation_count,
                    &mut violations,
                );
            }
        }
    }

    Ok(VerifyReport {
        wires,
        rows_checked: rows,
        bijective: seen.iter().all(|&b| b),
        violation_count,
        violations,
    })
}

/// Gate counts, wire budget, and depth under wire conflicts.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GateCensus {
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    pub ancilla_count: usize,
    pub depth: usize,
}

pub fn gate_census(program: &OracleProgram) -> GateCensus {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut layer = vec![0usize; program.wire_count()];
    let mut depth = 0usize;
    for op in &program.circuit.ops {
        *counts.entry(op.kind.name().to_string()).or_insert(0) += 1;
        let at = op.qubits.iter().map(|&q| layer[q]).max().unwrap_or(0) + 1;
        for &q in &op.qubits {
            layer[q] = at;
        }
        depth = depth.max(at);
    }
    GateCensus {
        total: counts.values().sum(),
        counts,
        ancilla_count: program.ancilla_wires.len(),
        depth,
    }
}

/// Lower every MCX with three or more controls to a CCX ladder over a
/// shared pool of clean ancillas appended after the existing wires. The
/// lowered program computes the same function and still uncomputes.
pub fn lower_mcx(program: &OracleProgram) -> OracleProgram {
    let pool_need = program
        .circuit
        .ops
        .iter()
        .filter(|op| op.kind == GateKind::Mcx)
        .map(|op| op.qubits.len().saturating_sub(3))
        .max()
        .unwrap_or(0);
    let base = program.wire_count();
    let mut circuit = Circuit::new(base + pool_need);

    for op in &program.circuit.ops {
        if op.kind == GateKind::Mcx && op.qubits.len() > 3 {
            let (controls, target) = op.qubits.split_at(op.qubits.len() - 1);
            let k = controls.len();
            let mut ladder = Vec::with_capacity(k - 2);
            ladder.push(GateOp::ccx(controls[0], controls[1], base));
            for (j, &ctrl) in controls.iter().enumerate().take(k - 1).skip(2) {
                ladder.push(GateOp::ccx(ctrl, base + j - 2, base + j - 1));
            }
            for g in &ladder {
                circuit.push(g.clone()).unwrap();
            }
            circuit
                .push(GateOp::ccx(controls[k - 1], base + k - 3, target[0]))
                .unwrap();
            for g in ladder.iter().rev() {
                circuit.push(g.clone()).unwrap();
            }
        } else {
            circuit.push(op.clone()).unwrap();
        }
    }

    let mut ancilla_wires = program.ancilla_wires.clone();
    ancilla_wires.extend(base..base + pool_need);
    OracleProgram {
        circuit,
        input_wires: program.input_wires.clone(),
        output_wire: program.output_wire,
        ancilla_wires,
        truth: program.truth.clone(),
        description: format!("{} (MCX lowered to CCX ladders)", program.description),
    }
}

/// Textual circuit format: a header naming the wire roles, then one gate
/// per line (`GATE q0 q1 ...`). Lines starting with `#` are comments.
pub fn emit_circuit_text(program: &OracleProgram) -> String {
    let mut out = String::new();
    writeln!(out, "# {}", program.description).unwrap();
    write!(out, "wires {} inputs", program.wire_count()).unwrap();
    for w in &program.input_wires {
        write!(out, " {w}").unwrap();
    }
    write!(out, " output {}", program.output_wire).unwrap();
    write!(out, " ancilla").unwrap();
    for w in &program.ancilla_wires {
        write!(out, " {w}").unwrap();
    }
    writeln!(out).unwrap();
    for op in &program.circuit.ops {
        write!(out, "{}", op.kind.name()).unwrap();
        for q in &op.qubits {
            write!(out, " {q}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// A re-ingested circuit file: wiring roles plus the gate list. The truth
/// function is not part of the format.
#[derive(Clone, Debug)]
pub struct ParsedCircuit {
    pub circuit: Circuit,
    pub input_wires: Vec<usize>,
    pub output_wire: usize,
    pub ancilla_wires: Vec<usize>,
}

pub fn parse_circuit_text(text: &str) -> Result<ParsedCircuit> {
    let mut header: Option<(usize, Vec<usize>, usize, Vec<usize>)> = None;
    let mut ops: Vec<GateOp> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "wires" {
            if header.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate wires header".into(),
                });
            }
            let parse_idx = |tok: &str| -> Result<usize> {
                tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad wire index '{tok}'"),
                })
            };
            let wires = parse_idx(tokens.get(1).ok_or(Error::Parse {
                line: line_no,
                message: "missing wire count".into(),
            })?)?;
            let mut inputs = Vec::new();
            let mut output = None;
            let mut ancilla = Vec::new();
            let mut section = "";
            for tok in &tokens[2..] {
                match *tok {
                    "inputs" | "output" | "ancilla" => section = tok,
                    _ => {
                        let w = parse_idx(tok)?;
                        match section {
                            "inputs" => inputs.push(w),
                            "output" => output = Some(w),
                            "ancilla" => ancilla.push(w),
                            _ => {
                                return Err(Error::Parse {
                                    line: line_no,
                                    message: format!("wire {w} outside any section"),
                                })
                            }
                        }
                    }
                }
            }
            let output = output.ok_or(Error::Parse {
                line: line_no,
                message: "header missing output wire".into(),
            })?;
            header = Some((wires, inputs, output, ancilla));
            continue;
        }

        let kind = GateKind::from_name(tokens[0]).ok_or(Error::Parse {
            line: line_no,
            message: format!("unknown gate '{}'", tokens[0]),
        })?;
        let qubits: Vec<usize> = tokens[1..]
            .iter()
            .map(|tok| {
                tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad wire index '{tok}'"),
                })
            })
            .collect::<Result<_>>()?;
        ops.push(GateOp { kind, qubits });
    }

    let (wires, input_wires, output_wire, ancilla_wires) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing wires header".into(),
    })?;
    let mut circuit = Circuit::new(wires);
    circuit.extend(ops)?;
    Ok(ParsedCircuit {
        circuit,
        input_wires,
        output_wire,
        ancilla_wires,
    })
}
