//! DIMACS 3-CNF input, a tiny satisfiability oracle, and random formulas.

use rand::Rng;
use thiserror::Error;

/// A CNF formula with at most three distinct literals per clause.
/// Literals are DIMACS style: positive or negative 1-based variable ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Evaluate under `assignment`, index 0 holding variable 1.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.var_count);
        self.clauses.iter().all(|cl| {
            cl.iter().any(|&lit| {
                let value = assignment[(lit.unsigned_abs() as usize) - 1];
                (lit > 0) == value
            })
        })
    }
}

#[derive(Debug, Error)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {index}: {msg}")]
    BadClause { index: usize, msg: String },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
}

/// Parse DIMACS CNF text. Clauses are zero-terminated and may span lines;
/// duplicate literals within a clause are dropped; a clause must keep
/// between one and three distinct literals.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Syntax {
                    line,
                    msg: "duplicate header".into(),
                });
            }
            let t: Vec<&str> = trimmed.split_whitespace().collect();
            if t.len() != 4 || t[1] != "cnf" {
                return Err(CnfError::Syntax {
                    line,
                    msg: "expected: p cnf <vars> <clauses>".into(),
                });
            }
            let vars = t[2].parse().map_err(|_| CnfError::Syntax {
                line,
                msg: format!("bad variable count {:?}", t[2]),
            })?;
            let m = t[3].parse().map_err(|_| CnfError::Syntax {
                line,
                msg: format!("bad clause count {:?}", t[3]),
            })?;
            header = Some((vars, m));
            continue;
        }
        let (vars, _) = header.ok_or(CnfError::Syntax {
            line,
            msg: "literals before header".into(),
        })?;
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| CnfError::Syntax {
                line,
                msg: format!("bad literal {tok:?}"),
            })?;
            if lit == 0 {
                let mut cl = std::mem::take(&mut current);
                cl.sort_unstable();
                cl.dedup();
                let index = clauses.len() + 1;
                if cl.is_empty() {
                    return Err(CnfError::BadClause {
                        index,
                        msg: "empty clause".into(),
                    });
                }
                if cl.len() > 3 {
                    return Err(CnfError::BadClause {
                        index,
                        msg: format!("{} distinct literals, at most 3 allowed", cl.len()),
                    });
                }
                clauses.push(cl);
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(CnfError::Syntax {
                        line,
                        msg: format!("literal {lit} exceeds variable count {vars}"),
                    });
                }
                current.push(lit);
            }
        }
    }
    let (vars, declared) = header.ok_or(CnfError::Syntax {
        line: text.lines().count().max(1),
        msg: "missing header".into(),
    })?;
    if !current.is_empty() {
        return Err(CnfError::BadClause {
            index: clauses.len() + 1,
            msg: "unterminated clause".into(),
        });
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula {
        var_count: vars,
        clauses,
    })
}

pub fn emit_dimacs(f: &CnfFormula) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", f.var_count, f.clauses.len()).unwrap();
    for cl in &f.clauses {
        for lit in cl {
            write!(out, "{lit} ").unwrap();
        }
        writeln!(out, "0").unwrap();
    }
    out
}

/// First satisfying assignment in lexicographic order (variable 1 flips
/// fastest), or None. Exhaustive; refuses formulas with many variables.
pub fn brute_force_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    assert!(f.var_count <= 24, "oracle is exhaustive; too many variables");
    let n = f.var_count;
    for bits in 0u64..(1u64 << n) {
        let assignment: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        if f.evaluate(&assignment) {
            return Some(assignment);
        }
    }
    None
}

/// Uniform random 3-CNF: each clause has three distinct variables with
/// random signs.
pub fn random_cnf3<R: Rng>(rng: &mut R, var_count: usize, clause_count: usize) -> CnfFormula {
    assert!(var_count >= 3);
    let clauses = (0..clause_count)
        .map(|_| {
            let mut vars = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = rng.gen_range(1..=var_count) as i32;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.iter()
                .map(|&v| if rng.gen() { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula {
        var_count,
        clauses,
    }
}

/// Random 3-CNF guaranteed satisfiable: clauses are resampled until they
/// hold under a hidden random assignment, which is returned alongside.
pub fn random_satisfiable_cnf3<R: Rng>(
    rng: &mut R,
    var_count: usize,
    clause_count: usize,
) -> (CnfFormula, Vec<bool>) {
    assert!(var_count >= 3);
    let planted: Vec<bool> = (0..var_count).map(|_| rng.gen()).collect();
    let mut clauses = Vec::with_capacity(clause_count);
    while clauses.len() < clause_count {
        let mut vars = Vec::with_capacity(3);
        while vars.len() < 3 {
            let v = rng.gen_range(1..=var_count) as i32;
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let clause: Vec<i32> = vars
            .iter()
            .map(|&v| if rng.gen() { v } else { -v })
            .collect();
        let ok = clause.iter().any(|&lit| {
            let value = planted[(lit.unsigned_abs() as usize) - 1];
            (lit > 0) == value
        });
        if ok {
            clauses.push(clause);
        }
    }
    (
        CnfFormula {
            var_count,
            clauses,
        },
        planted,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_round_trip() {
        let text = "c comment\np cnf 4 2\n1 -2 3 0\n-1\n4 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f.var_count, 4);
        assert_eq!(f.clauses, vec![vec![-2, 1, 3], vec![-1, 4]]);
        let emitted = emit_dimacs(&f);
        assert_eq!(parse_dimacs(&emitted).unwrap(), f);
        assert_eq!(emit_dimacs(&parse_dimacs(&emitted).unwrap()), emitted);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_dimacs("p cnf 2 1\n0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2 -1 -2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n3 0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
    }

    #[test]
    fn duplicate_literals_collapse() {
        let f = parse_dimacs("p cnf 3 1\n1 1 -2 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![-2, 1]]);
    }

    #[test]
    fn sat_oracle_agrees_with_evaluate() {
        let sat = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap();
        let a = brute_force_sat(&sat).unwrap();
        assert!(sat.evaluate(&a));
        let unsat = parse_dimacs(
            "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n",
        )
        .unwrap();
        assert!(brute_force_sat(&unsat).is_none());
    }

    #[test]
    fn planted_formulas_are_satisfiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (f, planted) = random_satisfiable_cnf3(&mut rng, 5, 12);
            assert!(f.evaluate(&planted));
            assert!(brute_force_sat(&f).is_some());
        }
    }
}
