//! Acceptance suite: one test per criterion, each printing a `[PASS]` line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlq_core::cnf::{
    brute_force_sat, count_satisfying, eval_formula, parse_dimacs, random_formula, CnfFormula,
};
use nlq_core::nonlinear::{drive_ideal, drive_iterated, drive_register, NonlinearConfig};
use nlq_core::oracle::{
    gate_census, lower_mcx, synth_equality_inverse_oracle, synth_sat_inverse_oracle,
    verify_synthesis, OneHitSpec, TruthFunction,
};
use nlq_core::pipeline::{
    analytic_outcome, apply_oracle_phase_stage, build_global_unitary, derive_seed,
    e1_e2_mismatch_probability, phase_stage_diagonal, prepare_input_state, run_onehit, solve_sat,
    Backend, RegisterLayout, SatPipeline, Verdict,
};
use nlq_core::state::{cpi_matrix, GateOp, StateVector};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_state<R: Rng>(qubits: usize, rng: &mut R) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << qubits)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut s = StateVector::from_amplitudes(qubits, amps).unwrap();
    s.renormalize().unwrap();
    s
}

/// Criterion 1: the two one-bit worked cases, bit-exact. Wires (f, u, i)
/// are (2, 1, 0) so ket strings read |fui>.
#[test]
fn criterion_1_one_bit_worked_examples() {
    // Case 1: f answers 0 on input 0, so f copies i.
    let mut s = StateVector::new(3).unwrap();
    s.apply_gate(&GateOp::h(0)).unwrap();
    s.apply_gate(&GateOp::h(1)).unwrap();
    s.apply_gate(&GateOp::cnot(0, 2)).unwrap();
    for idx in [0b000, 0b010, 0b101, 0b111] {
        assert!((s.amplitude(idx) - c(0.5)).norm() <= 1e-12, "pre-CPI ket {idx:03b}");
    }
    s.apply_gate(&GateOp::cpi(2, 1, 0)).unwrap();
    for (idx, want) in [(0b000, 0.5), (0b010, 0.5), (0b101, 0.5), (0b111, -0.5)] {
        assert!((s.amplitude(idx) - c(want)).norm() <= 1e-12, "post-CPI ket {idx:03b}");
    }
    drive_ideal(&mut s, 1).unwrap();
    assert!((s.amplitude(0b000) - c(1.0)).norm() <= 1e-12);
    assert!((s.probability_of(&[(0, false)]) - 1.0).abs() <= 1e-12);

    // Case 2: f answers 0 on input 1, so f negates i.
    let mut s = StateVector::new(3).unwrap();
    s.apply_gate(&GateOp::h(0)).unwrap();
    s.apply_gate(&GateOp::h(1)).unwrap();
    s.apply_gate(&GateOp::cnot(0, 2)).unwrap();
    s.apply_gate(&GateOp::x(2)).unwrap();
    for idx in [0b001, 0b011, 0b100, 0b110] {
        assert!((s.amplitude(idx) - c(0.5)).norm() <= 1e-12, "pre-CPI ket {idx:03b}");
    }
    s.apply_gate(&GateOp::cpi(2, 1, 0)).unwrap();
    for (idx, want) in [(0b001, 0.5), (0b011, 0.5), (0b100, 0.5), (0b110, -0.5)] {
        assert!((s.amplitude(idx) - c(want)).norm() <= 1e-12, "post-CPI ket {idx:03b}");
    }
    drive_ideal(&mut s, 1).unwrap();
    assert!((s.amplitude(0b001) - c(1.0)).norm() <= 1e-12);
    assert!((s.probability_of(&[(0, true)]) - 1.0).abs() <= 1e-12);

    // The full pipeline reproduces both outcomes.
    for (target, want_p) in [(0u64, 1.0), (1u64, 1.0)] {
        let spec = OneHitSpec::new(1, target).unwrap();
        let r = run_onehit(&spec, &NonlinearConfig::ideal(), Backend::Dense).unwrap();
        assert!((r.success_probability - want_p).abs() <= 1e-12);
    }

    println!("[PASS] criterion 1: one-bit worked examples bit-exact");
}

/// Criterion 2: the CPI matrix is diag(1,1,1,1,1,1,-1,-1) exactly.
#[test]
fn criterion_2_cpi_matrix() {
    let m = cpi_matrix();
    for (i, row) in m.iter().enumerate() {
        for (j, &entry) in row.iter().enumerate() {
            let want = if i != j {
                c(0.0)
            } else if i >= 6 {
                c(-1.0)
            } else {
                c(1.0)
            };
            assert_eq!(entry, want, "entry ({i},{j})");
        }
    }
    println!("[PASS] criterion 2: CPI matrix equals diag(1,1,1,1,1,1,-1,-1)");
}

fn distributions_agree(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>, tol: f64) {
    let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    for key in keys {
        let pa = a.get(key).copied().unwrap_or(0.0);
        let pb = b.get(key).copied().unwrap_or(0.0);
        assert!((pa - pb).abs() <= tol, "outcome {key}: {pa} vs {pb}");
    }
}

/// Criterion 3: success probability 1 for every width and target, and the
/// three backends agree on the whole distribution.
#[test]
fn criterion_3_one_hit_law() {
    let nl = NonlinearConfig::ideal();
    for n in 1..=4usize {
        for target in 0..1u64 << n {
            let spec = OneHitSpec::new(n, target).unwrap();
            let dense = run_onehit(&spec, &nl, Backend::Dense).unwrap();
            let structured = run_onehit(&spec, &nl, Backend::Structured).unwrap();
            let analytic = run_onehit(&spec, &nl, Backend::Analytic).unwrap();
            assert!((dense.success_probability - 1.0).abs() <= 1e-9, "dense n={n} c={target}");
            assert!(
                (structured.success_probability - 1.0).abs() <= 1e-9,
                "structured n={n} c={target}"
            );
            distributions_agree(&dense.e2_distribution, &analytic.e2_distribution, 1e-10);
            distributions_agree(&structured.e2_distribution, &analytic.e2_distribution, 1e-10);
        }
    }
    println!("[PASS] criterion 3: one-hit success probability 1 on all backends, N <= 4");
}

/// Criterion 4: the dense diagonal operator matches the gate-level stage
/// and is unitary.
#[test]
fn criterion_4_global_unitary() {
    for n in 1..=2usize {
        for target in 0..1u64 << n {
            let spec = OneHitSpec::new(n, target).unwrap();
            let u = build_global_unitary(&spec).unwrap();
            let measured = phase_stage_diagonal(&spec).unwrap();
            assert_eq!(measured.len(), u.dim);
            for (k, &m) in measured.iter().enumerate() {
                assert!(
                    (m - u.entry(k, k)).norm() <= 1e-12,
                    "n={n} c={target} basis {k}"
                );
            }
            assert!(u.unitarity_residual() <= 1e-12, "n={n} c={target}");
        }
    }
    println!("[PASS] criterion 4: global unitary matches the gate-level phase stage, N <= 2");
}

/// Criterion 5: verdicts agree with brute force over 200+ random formulas.
#[test]
fn criterion_5_sat_soundness_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let nl = NonlinearConfig::ideal();
    let mut sat_seen = 0usize;
    let mut unsat_seen = 0usize;
    for case in 0..220 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=20);
        let formula = random_formula(n, m, &mut rng);
        let quantum = solve_sat(&formula, 20, &nl, case as u64, Backend::Structured).unwrap();
        let classical = brute_force_sat(&formula).unwrap();
        match (&quantum.verdict, &classical) {
            (Verdict::Sat, Some(_)) => {
                sat_seen += 1;
                let witness = quantum.witness.expect("SAT verdict carries a witness");
                assert!(eval_formula(&formula, &witness), "witness fails classically");
            }
            (Verdict::Unsat, None) => unsat_seen += 1,
            (got, want) => panic!(
                "case {case}: solver said {got:?}, brute force said {}",
                if want.is_some() { "SAT" } else { "UNSAT" }
            ),
        }
    }
    assert!(sat_seen >= 20 && unsat_seen >= 20, "corpus unbalanced: {sat_seen}/{unsat_seen}");
    println!(
        "[PASS] criterion 5: 220 random formulas agree with brute force ({sat_seen} SAT, {unsat_seen} UNSAT)"
    );
}

/// Exhaustive formula set over one and two variables plus seeded random
/// formulas up to four variables.
fn small_formula_corpus(random_count: usize, seed: u64) -> Vec<CnfFormula> {
    let mut corpus = Vec::new();
    // n = 1: clauses are (+1) or (-1); every 1- and 2-clause formula.
    let unit_clauses: Vec<Vec<i32>> = vec![vec![1], vec![-1]];
    for a in &unit_clauses {
        corpus.push(CnfFormula::new(1, vec![a.clone()]).unwrap());
        for b in &unit_clauses {
            corpus.push(CnfFormula::new(1, vec![a.clone(), b.clone()]).unwrap());
        }
    }
    // n = 2: clauses are the four sign patterns over (x1, x2).
    let pair_clauses: Vec<Vec<i32>> = vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]];
    for a in &pair_clauses {
        corpus.push(CnfFormula::new(2, vec![a.clone()]).unwrap());
        for b in &pair_clauses {
            corpus.push(CnfFormula::new(2, vec![a.clone(), b.clone()]).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_count {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=12);
        corpus.push(random_formula(n, m, &mut rng));
    }
    corpus
}

/// Criterion 6: P(t=0) = S/(S+1) at amplitude level, and the one-satisfying
/// -assignment case empirically splits 50/50.
#[test]
fn criterion_6_outcome_statistics() {
    let nl = NonlinearConfig::ideal();
    for formula in small_formula_corpus(150, 7) {
        let s = count_satisfying(&formula).unwrap() as f64;
        let pipeline = SatPipeline::new(&formula, &nl, Backend::Structured).unwrap();
        let expected = s / (s + 1.0);
        let got = pipeline.probability_t_zero();
        assert!(
            (got - expected).abs() <= 1e-9,
            "P(t=0) = {got}, expected {expected} with S = {s}"
        );
    }

    let unit = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
    let pipeline = SatPipeline::new(&unit, &nl, Backend::Structured).unwrap();
    let trials = 10_000usize;
    let mut zeros = 0usize;
    for trial in 0..trials {
        let (t, _) = pipeline.trial(derive_seed(99, trial as u64)).unwrap();
        if !t {
            zeros += 1;
        }
    }
    let freq = zeros as f64 / trials as f64;
    assert!((freq - 0.5).abs() <= 0.02, "t=0 frequency {freq} outside 0.5 +- 0.02");

    println!("[PASS] criterion 6: P(t=0) = S/(S+1) exactly; S=1 trials split {freq:.4}");
}

/// Criterion 7: with M = 5 on an S = 1 instance, the missed-SAT fraction
/// over 10^4 batches sits at 2^-5 within 0.01.
#[test]
fn criterion_7_repetition_bound() {
    let unit = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
    let nl = NonlinearConfig::ideal();
    let batches = 10_000usize;
    let mut missed = 0usize;
    for batch in 0..batches {
        let verdict = solve_sat(&unit, 5, &nl, batch as u64, Backend::Structured).unwrap();
        match verdict.verdict {
            Verdict::Unsat => missed += 1,
            Verdict::Sat => assert!(eval_formula(&unit, &verdict.witness.unwrap())),
        }
    }
    let fraction = missed as f64 / batches as f64;
    assert!(
        (fraction - 0.03125).abs() <= 0.01,
        "missed-SAT fraction {fraction} outside 2^-5 +- 0.01"
    );
    println!("[PASS] criterion 7: missed-SAT fraction {fraction:.5} ~ 2^-5 over 10^4 batches");
}

/// Scalar reference for the single-qubit merge recurrence, tracking the
/// normalized residual after every step.
fn scalar_trajectory(a0: Complex64, b0: Complex64, eta: f64, steps: usize) -> Vec<f64> {
    let mut a = a0;
    let mut b = b0;
    let mut residuals = Vec::with_capacity(steps);
    for _ in 0..steps {
        a += b * eta;
        b *= 1.0 - eta;
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        a /= n;
        b /= n;
        residuals.push(b.norm());
    }
    residuals
}

/// Criterion 8: geometric convergence bound on drivable superpositions,
/// plus agreement between the iterated and ideal modes.
#[test]
fn criterion_8_nonlinearity_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);

    // Part 1: residual after T steps <= (1-eta)^T * initial + 1e-12 over
    // 100 random single-qubit superpositions. The bound is a theorem for
    // states whose components overlap at least (1-eta)*|psi1|^2 (the
    // condition is preserved by the merge step), so the sampler draws from
    // that class: amplitudes (cos th, e^{i ph} sin th) with th <= pi/4 and
    // the phase accepted when cos(ph) >= (1-eta) tan(th).
    for &eta in &[0.5, (0.1f64).sin()] {
        let mut accepted = 0;
        while accepted < 100 {
            let theta = rng.gen_range(0.05..std::f64::consts::FRAC_PI_4);
            let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            if phi.cos() < (1.0 - eta) * theta.tan() + 1e-9 {
                continue;
            }
            accepted += 1;
            let a0 = c(theta.cos());
            let b0 = Complex64::from_polar(theta.sin(), phi);
            let r0 = b0.norm();

            let trajectory = scalar_trajectory(a0, b0, eta, 250);
            for (step, &r) in trajectory.iter().enumerate() {
                let bound = (1.0 - eta).powi(step as i32 + 1) * r0 + 1e-12;
                assert!(
                    r <= bound,
                    "eta={eta} theta={theta:.3} phi={phi:.3}: residual {r} > {bound} at step {}",
                    step + 1
                );
            }

            // The register drive reproduces the scalar recurrence.
            let mut s = StateVector::from_amplitudes(1, vec![a0, b0]).unwrap();
            let config = NonlinearConfig::iterated(0.2)
                .with_eta(eta)
                .with_tolerance(1e-8);
            let stats = drive_iterated(&mut s, 0, &config).unwrap();
            let scalar_r = trajectory[stats.steps_used - 1];
            assert!((stats.final_residual - scalar_r).abs() <= 1e-12);
            assert!(stats.final_residual <= 1e-8);
        }
    }

    // Part 2: iterated and ideal modes agree within 10 * residual_tol.
    let tol = 1e-8;
    let config = NonlinearConfig::iterated(0.3).with_tolerance(tol);
    let mut checked = 0;
    while checked < 100 {
        let state = random_state(3, &mut rng);
        let qubit = rng.gen_range(0..3);
        let mut ideal = state.clone();
        if drive_ideal(&mut ideal, qubit).is_err() {
            continue; // degenerate draw
        }
        checked += 1;
        let mut iterated = state.clone();
        drive_iterated(&mut iterated, qubit, &config).unwrap();
        let diff: f64 = (0..state.len())
            .map(|k| (ideal.amplitude(k) - iterated.amplitude(k)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 10.0 * tol, "modes differ by {diff}");
    }

    println!("[PASS] criterion 8: geometric residual bound and mode agreement hold");
}

fn r_squared(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Criterion 9: every synthesized oracle in the corpus passes exhaustive
/// verification (plain and MCX-lowered), and gate counts grow linearly in
/// clause count.
#[test]
fn criterion_9_oracle_synthesis() {
    // Equality oracles, every width and target up to n = 4.
    for n in 1..=4usize {
        for target in 0..1u64 << n {
            let program = synth_equality_inverse_oracle(OneHitSpec::new(n, target).unwrap());
            let report = verify_synthesis(&program).unwrap();
            assert!(report.passed(), "equality n={n} c={target}: {:?}", report.violations);
        }
    }

    // SAT oracles small enough for the 20-wire exhaustive budget,
    // plain and lowered.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut verified = 0;
    while verified < 40 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=6);
        let formula = random_formula(n, m, &mut rng);
        let program = synth_sat_inverse_oracle(&formula);
        let lowered = lower_mcx(&program);
        if lowered.wire_count() > 20 {
            continue;
        }
        verified += 1;
        let report = verify_synthesis(&program).unwrap();
        assert!(report.passed(), "SAT oracle n={n} m={m}: {:?}", report.violations);
        let report = verify_synthesis(&lowered).unwrap();
        assert!(report.passed(), "lowered oracle n={n} m={m}: {:?}", report.violations);
    }

    // Linear gate growth: cumulative clause prefixes of one random stream.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let clause_stream: Vec<Vec<i32>> = (0..50)
        .map(|_| random_formula(5, 1, &mut rng).clauses()[0].clone())
        .collect();
    let mut points = Vec::new();
    for m in 1..=50usize {
        let formula = CnfFormula::new(5, clause_stream[..m].to_vec()).unwrap();
        let census = gate_census(&synth_sat_inverse_oracle(&formula));
        assert_eq!(census.ancilla_count, m + 2);
        points.push((m as f64, census.total as f64));
    }
    assert!(points.windows(2).all(|w| w[1].1 > w[0].1), "gate count not increasing");
    let r2 = r_squared(&points);
    assert!(r2 >= 0.99, "R^2 = {r2}");

    println!("[PASS] criterion 9: oracles verify exhaustively; gate count linear in clauses (R^2 = {r2:.5})");
}

/// Criterion 10: randomized drive and pipeline properties at 1e-12.
#[test]
fn criterion_10_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    // Idempotence (exact) and commutation across qubits.
    for _ in 0..100 {
        let state = random_state(3, &mut rng);

        let mut once = state.clone();
        if drive_ideal(&mut once, 0).is_err() {
            continue;
        }
        let mut twice = once.clone();
        drive_ideal(&mut twice, 0).unwrap();
        assert_eq!(once.amplitudes(), twice.amplitudes(), "idempotence must be exact");

        let mut ab = state.clone();
        let mut ba = state.clone();
        if drive_ideal(&mut ab, 1).is_err() || drive_ideal(&mut ab, 2).is_err() {
            continue;
        }
        drive_ideal(&mut ba, 2).unwrap();
        drive_ideal(&mut ba, 1).unwrap();
        for k in 0..ab.len() {
            assert!((ab.amplitude(k) - ba.amplitude(k)).norm() <= 1e-12, "commutation");
        }
    }

    // Global-phase invariance and sign invariance of the drive.
    for _ in 0..100 {
        let state = random_state(2, &mut rng);
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));

        let mut plain = state.clone();
        if drive_ideal(&mut plain, 0).is_err() {
            continue;
        }
        let mut rotated = state.clone();
        for a in rotated.amplitudes_mut() {
            *a *= phase;
        }
        drive_ideal(&mut rotated, 0).unwrap();
        let mut flipped = state.clone();
        for a in flipped.amplitudes_mut() {
            *a = -*a;
        }
        drive_ideal(&mut flipped, 0).unwrap();

        for k in 0..plain.len() {
            let p = plain.amplitude(k);
            assert!(
                (p.norm_sqr() - rotated.amplitude(k).norm_sqr()).abs() <= 1e-12,
                "global phase changed the distribution"
            );
            assert!(
                (flipped.amplitude(k) + p).norm() <= 1e-12,
                "sign flip must flip the output sign exactly"
            );
        }
    }

    // e1 = e2 support preservation through every stage of the pipeline.
    let mut rng2 = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..20 {
        let n = rng2.gen_range(1..=3);
        let target = rng2.gen_range(0..1u64 << n);
        let program = synth_equality_inverse_oracle(OneHitSpec::new(n, target).unwrap());
        let layout = RegisterLayout::for_oracle(&program).unwrap();
        let mut state = prepare_input_state(&layout).unwrap();
        assert!(e1_e2_mismatch_probability(&state, &layout) <= 1e-12);
        apply_oracle_phase_stage(&mut state, &program, &layout).unwrap();
        assert!(e1_e2_mismatch_probability(&state, &layout) <= 1e-12);
        drive_register(&mut state, &layout.u, &NonlinearConfig::ideal()).unwrap();
        assert!(e1_e2_mismatch_probability(&state, &layout) <= 1e-12);
    }

    println!("[PASS] criterion 10: drive and pipeline properties hold at 1e-12");
}

/// Exact outcome law backing criteria 3 and 6: the final e2 distribution
/// is uniform over the oracle's zeros, on every backend.
#[test]
fn backend_agreement_on_sat_distributions() {
    let nl = NonlinearConfig::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut corpus = small_formula_corpus(0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        corpus.push(random_formula(n, m, &mut rng));
    }

    fn supports_agree(a: &[(u64, f64)], b: &[(u64, f64)], tol: f64) {
        let mut map: BTreeMap<u64, f64> = a.iter().copied().collect();
        for &(v, p) in b {
            let pa = map.remove(&v).unwrap_or(0.0);
            assert!((pa - p).abs() <= tol, "outcome {v}: {pa} vs {p}");
        }
        for (&v, &p) in &map {
            assert!(p.abs() <= tol, "outcome {v} only on one backend with mass {p}");
        }
    }

    let mut dense_checked = 0usize;
    for formula in corpus {
        let truth = TruthFunction::Sat(formula.clone());
        let analytic = analytic_outcome(&truth).unwrap();
        let n_bits = truth.input_bits();

        let structured = SatPipeline::new(&formula, &nl, Backend::Structured).unwrap();
        let zeros = count_satisfying(&formula).unwrap() + 1;
        assert_eq!(analytic.distribution.len() as u64, zeros);
        supports_agree(structured.support(), &analytic.distribution, 1e-10);
        let t0 = structured.probability_t_zero();
        assert!((t0 - (zeros - 1) as f64 / zeros as f64).abs() <= 1e-10);

        // Dense agreement on the wire-capped slice of the corpus.
        let program = synth_sat_inverse_oracle(&formula);
        if 3 * n_bits + 1 + program.ancilla_wires.len() <= 22 {
            dense_checked += 1;
            let dense = SatPipeline::new(&formula, &nl, Backend::Dense).unwrap();
            supports_agree(dense.support(), &analytic.distribution, 1e-10);
            supports_agree(dense.support(), structured.support(), 1e-10);
            for trial in 0..8 {
                let seed = derive_seed(3, trial);
                let (td, xd) = dense.trial(seed).unwrap();
                let (ts, xs) = structured.trial(seed).unwrap();
                assert_eq!((td, xd.bits), (ts, xs.bits), "dense/structured trial mismatch");
            }
        }
    }
    assert!(dense_checked >= 60, "only {dense_checked} formulas fit the dense slice");
    println!("[PASS] backends agree on 3SAT outcome distributions ({dense_checked} dense-checked)");
}
