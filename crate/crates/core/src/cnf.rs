//! 3-CNF formulas: DIMACS ingestion, evaluation, and the exhaustive
//! satisfiability oracle used to verify every quantum-side claim.
//!
//! Variables are 1-indexed in DIMACS and 0-indexed internally; a literal
//! `+v` / `-v` maps to variable `v-1`. Clauses keep duplicate literals and
//! tautologies as written; the semantics stay unambiguous.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Exhaustive enumeration cap for `count_satisfying` / `brute_force_sat`.
pub const BRUTE_FORCE_VAR_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Build from signed 1-indexed literals, validating the shape: at least
    /// one clause, one to three nonzero literals each, all within range.
    pub fn new(var_count: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if var_count == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "formula must have at least one variable".into(),
            });
        }
        if clauses.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "formula must have at least one clause".into(),
            });
        }
        for clause in &clauses {
            if clause.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    message: "empty clause".into(),
                });
            }
            if clause.len() > 3 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("clause has {} literals, max is 3", clause.len()),
                });
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > var_count {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("literal {lit} out of range for {var_count} variables"),
                    });
                }
            }
        }
        Ok(CnfFormula { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }
}

/// A full assignment; `bits[i]` is the value of variable `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    /// Decode from a basis index with variable 1 in bit 0.
    pub fn from_index(var_count: usize, index: u64) -> Self {
        Assignment {
            bits: (0..var_count).map(|i| index >> i & 1 == 1).collect(),
        }
    }

    /// Basis index with variable 1 in bit 0.
    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| 1u64 << i)
            .sum()
    }
}

impl fmt::Display for Assignment {
    /// Variable 1 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Conjunction over clauses of disjunction over literals.
pub fn eval_formula(formula: &CnfFormula, x: &Assignment) -> bool {
    debug_assert_eq!(x.bits.len(), formula.var_count);
    formula.clauses.iter().all(|clause| {
        clause.iter().any(|&lit| {
            let value = x.bits[lit.unsigned_abs() as usize - 1];
            if lit > 0 {
                value
            } else {
                !value
            }
        })
    })
}

fn check_brute_cap(formula: &CnfFormula) -> Result<()> {
    if formula.var_count > BRUTE_FORCE_VAR_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force variables",
            requested: formula.var_count,
            cap: BRUTE_FORCE_VAR_CAP,
        });
    }
    Ok(())
}

/// Exact number of satisfying assignments, by exhaustive enumeration.
pub fn count_satisfying(formula: &CnfFormula) -> Result<u64> {
    check_brute_cap(formula)?;
    let n = formula.var_count;
    let mut count = 0u64;
    for index in 0..1u64 << n {
        if eval_formula(formula, &Assignment::from_index(n, index)) {
            count += 1;
        }
    }
    Ok(count)
}

/// SAT with the lexicographically first witness (comparing the printed
/// x1..xn string, so variable 1 is the most significant position), or UNSAT.
pub fn brute_force_sat(formula: &CnfFormula) -> Result<Option<Assignment>> {
    check_brute_cap(formula)?;
    let n = formula.var_count;
    for lex in 0..1u64 << n {
        // Reverse the bit order so lex counts with x1 as the high bit.
        let mut index = 0u64;
        for i in 0..n {
            if lex >> (n - 1 - i) & 1 == 1 {
                index |= 1 << i;
            }
        }
        let x = Assignment::from_index(n, index);
        if eval_formula(formula, &x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Standard DIMACS CNF: `c` comment lines, one `p cnf n m` header, clauses
/// as whitespace-separated literals terminated by 0 (free to span lines),
/// exactly m clauses and nothing after them.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("malformed header '{line}', expected 'p cnf n m'"),
                });
            }
            let n: usize = fields[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad variable count '{}'", fields[2]),
            })?;
            let m: usize = fields[3].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad clause count '{}'", fields[3]),
            })?;
            if n == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "variable count must be at least 1".into(),
                });
            }
            if m == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "clause count must be at least 1".into(),
                });
            }
            header = Some((n, m));
            continue;
        }

        let (n, m) = header.ok_or(Error::Parse {
            line: line_no,
            message: "clause data before 'p cnf' header".into(),
        })?;
        for token in line.split_whitespace() {
            if clauses.len() == m {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("trailing garbage after {m} clauses: '{token}'"),
                });
            }
            let lit: i32 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad literal '{token}'"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "empty clause".into(),
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("literal {lit} out of range for {n} variables"),
                    });
                }
                if current.len() == 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "clause longer than 3 literals".into(),
                    });
                }
                current.push(lit);
            }
        }
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: last_line,
        message: "missing 'p cnf' header".into(),
    })?;
    if !current.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            message: "unterminated clause at end of input".into(),
        });
    }
    if clauses.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header promised {m} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(n, clauses)
}

/// Canonical emitter: header line, then one zero-terminated clause per line.
pub fn emit_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!(
        "p cnf {} {}\n",
        formula.var_count,
        formula.clauses.len()
    );
    for clause in &formula.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Random formula with `m` clauses of min(3, n) distinct variables each,
/// signs uniform. Deterministic given the generator state.
pub fn random_formula<R: Rng>(var_count: usize, clause_count: usize, rng: &mut R) -> CnfFormula {
    assert!(var_count >= 1 && clause_count >= 1);
    let width = var_count.min(3);
    let clauses = (0..clause_count)
        .map(|_| {
            let mut vars: Vec<usize> = Vec::with_capacity(width);
            while vars.len() < width {
                let v = rng.gen_range(1..=var_count);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| if rng.gen::<bool>() { v as i32 } else { -(v as i32) })
                .collect()
        })
        .collect();
    CnfFormula::new(var_count, clauses).expect("generated clauses are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn formula(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn parse_unit_formula() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.var_count(), 1);
        assert_eq!(f.clauses(), &[vec![1]]);
    }

    #[test]
    fn parse_two_clause_formula() {
        let f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.var_count(), 2);
        assert_eq!(f.clauses(), &[vec![1, -2], vec![-1, 2]]);
    }

    #[test]
    fn parse_clause_spanning_lines_and_comments() {
        let f = parse_dimacs("c a comment\np cnf 3 1\nc mid comment\n1 2\n-3 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, -3]]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_dimacs("p cnf 1 1\n2 0\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        assert!(matches!(
            parse_dimacs("1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n1 0\n1 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_dimacs("p cnf 1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn eval_simple_formulas() {
        let unit = formula(1, &[&[1]]);
        assert!(eval_formula(&unit, &Assignment { bits: vec![true] }));
        assert!(!eval_formula(&unit, &Assignment { bits: vec![false] }));

        let contradiction = formula(1, &[&[1], &[-1]]);
        for bits in [vec![true], vec![false]] {
            assert!(!eval_formula(&contradiction, &Assignment { bits }));
        }

        // (x1 v x2 v x3)(!x1 v x2 v !x3) at x = (1,0,0).
        let f = formula(3, &[&[1, 2, 3], &[-1, 2, -3]]);
        let x = Assignment { bits: vec![true, false, false] };
        assert!(eval_formula(&f, &x));
    }

    #[test]
    fn count_satisfying_small_formulas() {
        assert_eq!(count_satisfying(&formula(1, &[&[1]])).unwrap(), 1);
        assert_eq!(count_satisfying(&formula(1, &[&[1], &[-1]])).unwrap(), 0);
        assert_eq!(count_satisfying(&formula(3, &[&[1, 2, 3]])).unwrap(), 7);
    }

    #[test]
    fn count_matches_definitional_sum_with_reversed_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..10 {
                let f = random_formula(n, 1 + rng.gen_range(0..6), &mut rng);
                let direct = count_satisfying(&f).unwrap();
                // Independent loop order: walk indices downward.
                let mut sum = 0u64;
                for index in (0..1u64 << n).rev() {
                    if eval_formula(&f, &Assignment::from_index(n, index)) {
                        sum += 1;
                    }
                }
                assert_eq!(direct, sum);
            }
        }
    }

    #[test]
    fn brute_force_verdicts() {
        let w = brute_force_sat(&formula(1, &[&[1]])).unwrap().unwrap();
        assert_eq!(w.bits, vec![true]);

        assert!(brute_force_sat(&formula(1, &[&[1], &[-1]])).unwrap().is_none());

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_formula(6, 1 + rng.gen_range(0..12), &mut rng);
            let count = count_satisfying(&f).unwrap();
            match brute_force_sat(&f).unwrap() {
                Some(w) => {
                    assert!(count > 0);
                    assert!(eval_formula(&f, &w));
                }
                None => assert_eq!(count, 0),
            }
        }
    }

    #[test]
    fn brute_force_witness_is_lexicographically_first() {
        // (x1 v x2): candidates in string order are 00, 01, 10, 11;
        // the first satisfying one is 01.
        let f = formula(2, &[&[1, 2]]);
        let w = brute_force_sat(&f).unwrap().unwrap();
        assert_eq!(w.to_string(), "01");
    }

    #[test]
    fn brute_force_cap() {
        let f = formula(25, &[&[1, 2, 3]]);
        assert!(matches!(
            count_satisfying(&f),
            Err(Error::CapExceeded { requested: 25, cap: 24, .. })
        ));
        assert!(brute_force_sat(&f).is_err());
    }

    #[test]
    fn emit_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            for _ in 0..8 {
                let f = random_formula(n, 1 + rng.gen_range(0..8), &mut rng);
                assert_eq!(parse_dimacs(&emit_dimacs(&f)).unwrap(), f);
            }
        }
    }

    #[test]
    fn assignment_index_round_trip() {
        for n in 1..=6usize {
            for index in 0..1u64 << n {
                let a = Assignment::from_index(n, index);
                assert_eq!(a.to_index(), index);
                assert_eq!(a.bits.len(), n);
            }
        }
        assert_eq!(Assignment::from_index(3, 0b011).to_string(), "110");
    }

    #[test]
    fn tautologies_and_duplicates_are_kept() {
        let f = formula(2, &[&[1, -1, 2], &[2, 2, 2]]);
        assert_eq!(f.clauses()[0].len(), 3);
        // x v !x v y is always true; y v y v y is just y.
        assert_eq!(count_satisfying(&f).unwrap(), 2);
    }
}
