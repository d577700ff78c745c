//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use rbcsp::encode::CnfFormula;
use rbcsp::{Assignment, Instance};

/// Number of models of `cnf` by DPLL with unit propagation. Variables left
/// unassigned once every clause is satisfied contribute a factor of two each.
pub fn count_models(cnf: &CnfFormula) -> u128 {
    let mut values = vec![0i8; cnf.var_count + 1];
    count_rec(cnf, &mut values)
}

fn lit_value(values: &[i8], lit: i64) -> i8 {
    let v = values[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

fn count_rec(cnf: &CnfFormula, values: &mut Vec<i8>) -> u128 {
    let mut trail = Vec::new();
    // unit propagation to fixpoint
    loop {
        let mut unit = None;
        let mut all_sat = true;
        for clause in &cnf.clauses {
            let mut open = 0;
            let mut last = 0;
            let mut sat = false;
            for &l in clause {
                match lit_value(values, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        last = l;
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            all_sat = false;
            if open == 0 {
                undo(values, &trail);
                return 0;
            }
            if open == 1 && unit.is_none() {
                unit = Some(last);
            }
        }
        if all_sat {
            let free = values[1..].iter().filter(|&&v| v == 0).count();
            undo(values, &trail);
            return 1u128 << free;
        }
        match unit {
            Some(l) => {
                values[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
                trail.push(l.unsigned_abs() as usize);
            }
            None => break,
        }
    }
    let var = (1..values.len()).find(|&v| values[v] == 0).unwrap();
    let mut total = 0;
    for val in [1, -1] {
        values[var] = val;
        total += count_rec(cnf, values);
    }
    values[var] = 0;
    undo(values, &trail);
    total
}

fn undo(values: &mut [i8], trail: &[usize]) {
    for &v in trail {
        values[v] = 0;
    }
}

/// Scans every constraint and every forbidden tuple explicitly.
pub fn naive_satisfies(inst: &Instance, a: &Assignment) -> bool {
    inst.constraints().iter().all(|c| {
        let projected: Vec<usize> = c.scope().iter().map(|&v| a.values()[v]).collect();
        c.forbidden_tuples().all(|t| t != projected)
    })
}
