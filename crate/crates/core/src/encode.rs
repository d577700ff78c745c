//! Direct encoding of table CSPs into CNF, and DIMACS text I/O.
//!
//! Proposition `v * d + a + 1` stands for "variable `v` takes value `a`".
//! Clause order: per variable (ascending) its at-least-one clause followed
//! by its pairwise at-most-one clauses, then one conflict clause per
//! forbidden tuple, constraints and tuples in stored order.

use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::model::{Assignment, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<i64>>,
}

pub fn literal(d: usize, var: usize, value: usize) -> i64 {
    (var * d + value + 1) as i64
}

pub fn encode_direct(inst: &Instance, amo: bool) -> CnfFormula {
    let (n, d) = (inst.n(), inst.d());
    let mut clauses = Vec::new();
    for v in 0..n {
        clauses.push((0..d).map(|a| literal(d, v, a)).collect());
        if amo {
            for a in 0..d {
                for b in a + 1..d {
                    clauses.push(vec![-literal(d, v, a), -literal(d, v, b)]);
                }
            }
        }
    }
    for c in inst.constraints() {
        for tuple in c.forbidden_tuples() {
            clauses.push(
                c.scope()
                    .iter()
                    .zip(&tuple)
                    .map(|(&v, &a)| -literal(d, v, a))
                    .collect(),
            );
        }
    }
    CnfFormula {
        var_count: n * d,
        clauses,
    }
}

/// Reads a CSP assignment off a propositional model given as literals
/// (positive = true). With `amo`, a variable with several true values is an
/// error; without it the smallest true value is taken.
pub fn decode_model(inst: &Instance, model: &[i64], amo: bool) -> Result<Assignment> {
    let (n, d) = (inst.n(), inst.d());
    let mut truth = vec![false; n * d];
    for &lit in model {
        let idx = lit.unsigned_abs() as usize;
        if lit == 0 || idx > n * d {
            return Err(Error::Decode(format!("literal {lit} out of range 1..={}", n * d)));
        }
        truth[idx - 1] = lit > 0;
    }
    let mut values = Vec::with_capacity(n);
    for v in 0..n {
        let mut chosen = (0..d).filter(|&a| truth[v * d + a]);
        let first = chosen
            .next()
            .ok_or_else(|| Error::Decode(format!("variable {v} has no true value")))?;
        if amo {
            if let Some(second) = chosen.next() {
                return Err(Error::Decode(format!(
                    "variable {v} takes both {first} and {second}"
                )));
            }
        }
        values.push(first);
    }
    Ok(Assignment::new(values))
}

/// Encodes an assignment as a full propositional model.
pub fn assignment_model(inst: &Instance, a: &Assignment) -> Vec<i64> {
    let d = inst.d();
    (0..inst.n())
        .flat_map(|v| {
            (0..d).map(move |b| {
                let lit = literal(d, v, b);
                if a.values()[v] == b {
                    lit
                } else {
                    -lit
                }
            })
        })
        .collect()
}

pub fn write_dimacs(cnf: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.var_count, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(parse_err(lineno, format!("bad problem line `{line}`")));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| parse_err(lineno, "bad variable count"))?;
            let count = parts[3]
                .parse()
                .map_err(|_| parse_err(lineno, "bad clause count"))?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| parse_err(lineno, "clause before problem line"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(parse_err(lineno, format!("literal {lit} exceeds {vars}")));
            } else {
                current.push(lit);
            }
        }
    }
    let (var_count, count) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if !current.is_empty() {
        return Err(parse_err(text.lines().count(), "unterminated clause"));
    }
    if clauses.len() != count {
        return Err(parse_err(
            text.lines().count(),
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula { var_count, clauses })
}
