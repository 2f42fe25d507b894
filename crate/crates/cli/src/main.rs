//! `nlq`: solve DIMACS CNF files on the simulated pipeline, run one-hit
//! demos, verify oracle synthesis, dump the phase-stage operator, and emit
//! gate-count scaling data.
//!
//! Exit codes: `solve` exits 0 on SAT, 1 on UNSAT, 2 on any error;
//! `verify-oracle` exits 0 when every row passes, 1 on violations, 2 on
//! errors; everything else exits 0 or 2.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nlq_core::cnf::{parse_dimacs, random_formula, CnfFormula};
use nlq_core::nonlinear::NonlinearConfig;
use nlq_core::oracle::{
    emit_circuit_text, gate_census, synth_equality_inverse_oracle, synth_sat_inverse_oracle,
    verify_synthesis, OneHitSpec, OracleProgram, VERIFY_WIRE_CAP,
};
use nlq_core::pipeline::{
    build_global_unitary, onehit_trace, run_onehit, solve_sat, Backend, Verdict,
};
use nlq_core::report::RunReport;
use nlq_core::state::{basis_label, StateVector};

#[derive(Parser)]
#[command(name = "nlq", version, about = "One-hit oracle simulator and 3SAT decision pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BackendArg {
    Dense,
    Structured,
    Analytic,
}

impl From<BackendArg> for Backend {
    fn from(arg: BackendArg) -> Backend {
        match arg {
            BackendArg::Dense => Backend::Dense,
            BackendArg::Structured => Backend::Structured,
            BackendArg::Analytic => Backend::Analytic,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum DriveArg {
    Ideal,
    Iterated,
}

#[derive(Args, Clone, Copy)]
struct PipelineFlags {
    /// Simulation backend.
    #[arg(long, value_enum, default_value = "structured")]
    backend: BackendArg,

    /// Nonlinear drive mode.
    #[arg(long, value_enum, default_value = "ideal")]
    nonlinear: DriveArg,

    /// Rotation offset for the iterated drive, radians in (0, pi/4).
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

impl PipelineFlags {
    fn nonlinear_config(&self) -> NonlinearConfig {
        match self.nonlinear {
            DriveArg::Ideal => NonlinearConfig::ideal(),
            DriveArg::Iterated => NonlinearConfig::iterated(self.epsilon),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a DIMACS CNF file by repeated pipeline runs.
    Solve {
        /// DIMACS CNF file.
        path: PathBuf,

        /// Repetition count M; UNSAT verdicts carry confidence 1 - 2^(-M).
        #[arg(long, default_value_t = 20)]
        reps: usize,

        /// Measurement seed; per-trial seeds derive from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[command(flatten)]
        pipeline: PipelineFlags,

        /// Print the JSON run report to stdout instead of the verdict line.
        #[arg(long)]
        json: bool,

        /// Also write the JSON run report to a file.
        #[arg(long)]
        report: Option<PathBuf>,

        /// Write the synthesized oracle circuit as text.
        #[arg(long)]
        emit_circuit: Option<PathBuf>,
    },

    /// Run the one-hit procedure for an equality oracle.
    Onehit {
        /// Oracle input width N.
        #[arg(long)]
        n: usize,

        /// Target bitstring of length N (the single accepted input).
        #[arg(long)]
        target: String,

        #[command(flatten)]
        pipeline: PipelineFlags,

        /// Print the state after each stage in ket notation (n <= 3 only).
        #[arg(long)]
        trace: bool,

        /// Print the JSON run report to stdout.
        #[arg(long)]
        json: bool,

        /// Write the synthesized oracle circuit as text.
        #[arg(long)]
        emit_circuit: Option<PathBuf>,
    },

    /// Dump the diagonal of the phase-stage operator and its unitarity
    /// residual.
    Matrix {
        /// Oracle input width N (at most 3).
        #[arg(long)]
        n: usize,

        /// Target bitstring of length N.
        #[arg(long)]
        target: String,

        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Emit CSV of oracle gate counts for growing clause counts.
    Scaling {
        /// Variable count for every generated formula.
        #[arg(long)]
        vars: usize,

        /// Emit one row per clause count from 1 to this bound.
        #[arg(long)]
        clauses_max: usize,

        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,

        /// Seed for the random clause stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Exhaustively verify the synthesized oracle for a DIMACS CNF file.
    VerifyOracle {
        /// DIMACS CNF file.
        path: PathBuf,

        /// Write the synthesized oracle circuit as text.
        #[arg(long)]
        emit_circuit: Option<PathBuf>,

        /// Testing aid: delete the gate at this index before verifying.
        #[arg(long, hide = true)]
        drop_gate: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}

fn read_formula(path: &Path) -> Result<CnfFormula, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn maybe_emit_circuit(path: Option<&PathBuf>, program: &OracleProgram) -> Result<(), String> {
    if let Some(path) = path {
        fs::write(path, emit_circuit_text(program))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Solve {
            path,
            reps,
            seed,
            pipeline,
            json,
            report,
            emit_circuit,
        } => {
            if reps == 0 {
                return Err("--reps must be at least 1".into());
            }
            let formula = read_formula(&path)?;
            maybe_emit_circuit(emit_circuit.as_ref(), &synth_sat_inverse_oracle(&formula))?;
            let nl = pipeline.nonlinear_config();
            let backend = Backend::from(pipeline.backend);
            let start = Instant::now();
            let verdict =
                solve_sat(&formula, reps, &nl, seed, backend).map_err(|e| e.to_string())?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

            let run_report = RunReport::for_solve(&formula, &verdict, backend, nl, seed, wall_time_ms);
            if let Some(path) = report {
                fs::write(&path, run_report.to_json())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if json {
                println!("{}", run_report.to_json());
            } else {
                match verdict.verdict {
                    Verdict::Sat => println!("SAT {}", verdict.witness.as_ref().unwrap()),
                    Verdict::Unsat => println!("UNSAT confidence={}", verdict.confidence),
                }
            }
            Ok(match verdict.verdict {
                Verdict::Sat => 0,
                Verdict::Unsat => 1,
            })
        }

        Command::Onehit {
            n,
            target,
            pipeline,
            trace,
            json,
            emit_circuit,
        } => {
            if target.len() != n {
                return Err(format!(
                    "target '{target}' has length {}, expected {n}",
                    target.len()
                ));
            }
            let spec = OneHitSpec::from_bitstring(&target).map_err(|e| e.to_string())?;
            maybe_emit_circuit(emit_circuit.as_ref(), &synth_equality_inverse_oracle(spec))?;
            let nl = pipeline.nonlinear_config();
            let backend = Backend::from(pipeline.backend);

            let start = Instant::now();
            let result = if trace {
                if n > 3 {
                    return Err("--trace supports n <= 3 only".into());
                }
                let trace_run = onehit_trace(&spec, &nl).map_err(|e| e.to_string())?;
                for (stage, state) in [
                    ("prepared", &trace_run.prepared),
                    ("post-phase", &trace_run.post_phase),
                    ("post-drive", &trace_run.post_drive),
                ] {
                    println!("stage {stage}:");
                    print_kets(state, n);
                }
                trace_run.result
            } else {
                run_onehit(&spec, &nl, backend).map_err(|e| e.to_string())?
            };
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

            println!("P(e2={target}) = {:.9}", result.success_probability);
            if json {
                let report = RunReport::for_onehit(
                    &target,
                    result.success_probability,
                    result.backend,
                    nl,
                    wall_time_ms,
                );
                println!("{}", report.to_json());
            }
            Ok(0)
        }

        Command::Matrix { n, target, out } => {
            if target.len() != n {
                return Err(format!(
                    "target '{target}' has length {}, expected {n}",
                    target.len()
                ));
            }
            let spec = OneHitSpec::from_bitstring(&target).map_err(|e| e.to_string())?;
            let unitary = build_global_unitary(&spec).map_err(|e| e.to_string())?;
            let mut content = format!("# diagonal of U over |e1;e2;u>, n={n}, target={target}\n");
            let mask = (1u64 << n) - 1;
            for (k, d) in unitary.diagonal().iter().enumerate() {
                let k = k as u64;
                content.push_str(&format!(
                    "|{};{};{}> {:+}\n",
                    basis_label(k & mask, n),
                    basis_label(k >> n & mask, n),
                    basis_label(k >> (2 * n) & mask, n),
                    *d as i64
                ));
            }
            content.push_str(&format!("unitarity_residual {:e}\n", unitary.unitarity_residual()));
            write_output(out.as_ref(), &content)?;
            Ok(0)
        }

        Command::Scaling {
            vars,
            clauses_max,
            out,
            seed,
        } => {
            if vars == 0 {
                return Err("--vars must be at least 1".into());
            }
            if clauses_max == 0 {
                return Err("--clauses-max must be at least 1".into());
            }
            // Rows are prefixes of one seeded clause stream, so each row
            // extends the previous formula by exactly one clause.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let clauses: Vec<Vec<i32>> = (0..clauses_max)
                .map(|_| random_formula(vars, 1, &mut rng).clauses()[0].clone())
                .collect();
            let mut content = String::from("clauses,gates,ancillas,depth\n");
            for m in 1..=clauses_max {
                let formula = CnfFormula::new(vars, clauses[..m].to_vec())
                    .map_err(|e| e.to_string())?;
                let census = gate_census(&synth_sat_inverse_oracle(&formula));
                content.push_str(&format!(
                    "{m},{},{},{}\n",
                    census.total, census.ancilla_count, census.depth
                ));
            }
            write_output(out.as_ref(), &content)?;
            Ok(0)
        }

        Command::VerifyOracle {
            path,
            emit_circuit,
            drop_gate,
        } => {
            let formula = read_formula(&path)?;
            let mut program = synth_sat_inverse_oracle(&formula);
            if program.wire_count() > VERIFY_WIRE_CAP {
                return Err(format!(
                    "oracle needs {} wires, exhaustive verification caps at {VERIFY_WIRE_CAP}",
                    program.wire_count()
                ));
            }
            maybe_emit_circuit(emit_circuit.as_ref(), &program)?;
            if let Some(index) = drop_gate {
                if index >= program.circuit.ops.len() {
                    return Err(format!("--drop-gate {index} out of range"));
                }
                program.circuit.ops.remove(index);
            }
            let report = verify_synthesis(&program).map_err(|e| e.to_string())?;
            if report.passed() {
                println!(
                    "verified {} rows over {} wires: all pass",
                    report.rows_checked, report.wires
                );
                Ok(0)
            } else {
                for v in &report.violations {
                    println!(
                        "violation at basis {}: {}",
                        basis_label(v.input_state, report.wires),
                        v.message
                    );
                }
                println!(
                    "{} of {} rows violated (bijective: {})",
                    report.violation_count, report.rows_checked, report.bijective
                );
                Ok(1)
            }
        }
    }
}

/// Print nonzero amplitudes grouped as |e1;e2;u>; the oracle output and
/// ancilla wires carry no mass at stage boundaries.
fn print_kets(state: &StateVector, n: usize) {
    let mask = (1u64 << n) - 1;
    for k in 0..state.len() as u64 {
        let amp = state.amplitude(k as usize);
        if amp.norm() <= 1e-9 {
            continue;
        }
        let e1 = k & mask;
        let e2 = k >> n & mask;
        let u = k >> (2 * n) & mask;
        let value = if amp.im.abs() <= 1e-12 {
            format!("{:+.6}", amp.re)
        } else {
            format!("{:+.6}{:+.6}i", amp.re, amp.im)
        };
        println!(
            "  {value} |{};{};{}>",
            basis_label(e1, n),
            basis_label(e2, n),
            basis_label(u, n)
        );
    }
}
