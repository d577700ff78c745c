//! Shared domain model: parameters, instances, assignments and solver outcomes.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{invalid, Error, Result};

/// Interpretation of the tightness parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// `p` is the exact proportion of forbidden tuples per constraint.
    Rb,
    /// Each tuple is forbidden independently with probability `p`.
    Rd,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Rb => f.write_str("RB"),
            Model::Rd => f.write_str("RD"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RB" => Ok(Model::Rb),
            "RD" => Ok(Model::Rd),
            other => Err(invalid(format!("unknown model `{other}` (expected RB or RD)"))),
        }
    }
}

/// The five model parameters plus variant, forcing flag and seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceParams {
    pub k: usize,
    pub n: usize,
    pub alpha: f64,
    pub r: f64,
    pub p: f64,
    pub model: Model,
    pub forced: bool,
    pub seed: u64,
}

impl InstanceParams {
    /// Unforced Model RB parameters with seed 0.
    pub fn new(k: usize, n: usize, alpha: f64, r: f64, p: f64) -> Self {
        InstanceParams {
            k,
            n,
            alpha,
            r,
            p,
            model: Model::Rb,
            forced: false,
            seed: 0,
        }
    }

    pub fn with_model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }

    pub fn with_forced(mut self, forced: bool) -> Self {
        self.forced = forced;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// Checks the range constraints on every field, excluding the derived
    /// domain size (see [`crate::generator::derive_dims`]).
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(invalid(format!("arity k must be >= 2, got {}", self.k)));
        }
        if self.n < self.k {
            return Err(invalid(format!(
                "n must be >= k, got n={} k={}",
                self.n, self.k
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(invalid(format!("r must be > 0, got {}", self.r)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(invalid(format!("p must lie in (0,1), got {}", self.p)));
        }
        Ok(())
    }
}

/// Domain size and constraint count derived from the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedDims {
    pub d: usize,
    pub m: usize,
}

/// Rounds to the nearest integer, halves going up.
pub fn round_half_up(x: f64) -> u64 {
    (x + 0.5).floor().max(0.0) as u64
}

/// A table constraint given by its forbidden tuples.
///
/// The scope is kept strictly increasing. Tuples are stored as mixed-radix
/// codes (first scope variable most significant), sorted ascending, so the
/// stored order is lexicographic in the sorted scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    scope: Vec<usize>,
    forbidden: Vec<u64>,
    d: usize,
}

impl Constraint {
    /// Builds a constraint from an arbitrary-order scope and its forbidden
    /// tuples (each listed in the same order as `scope`). The scope is sorted
    /// and tuple columns are permuted to match.
    pub fn new(scope: Vec<usize>, tuples: Vec<Vec<usize>>, d: usize) -> Result<Self> {
        let k = scope.len();
        if k == 0 {
            return Err(invalid("constraint scope is empty"));
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| scope[i]);
        let sorted: Vec<usize> = order.iter().map(|&i| scope[i]).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!("scope {scope:?} repeats a variable")));
        }
        tuple_space(d, k)?;
        let mut codes = Vec::with_capacity(tuples.len());
        for t in &tuples {
            if t.len() != k {
                return Err(invalid(format!(
                    "tuple {t:?} has length {}, scope has arity {k}",
                    t.len()
                )));
            }
            if let Some(&v) = t.iter().find(|&&v| v >= d) {
                return Err(invalid(format!("tuple value {v} out of range [0,{d})")));
            }
            let permuted: Vec<usize> = order.iter().map(|&i| t[i]).collect();
            codes.push(encode_tuple(&permuted, d));
        }
        Self::from_codes(sorted, codes, d)
    }

    /// Builds a constraint from a sorted scope and tuple codes in any order.
    pub(crate) fn from_codes(scope: Vec<usize>, mut codes: Vec<u64>, d: usize) -> Result<Self> {
        codes.sort_unstable();
        if codes.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!(
                "constraint on {scope:?} lists a forbidden tuple twice"
            )));
        }
        Ok(Constraint {
            scope,
            forbidden: codes,
            d,
        })
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn domain_size(&self) -> usize {
        self.d
    }

    /// Sorted mixed-radix codes of the forbidden tuples.
    pub fn forbidden_codes(&self) -> &[u64] {
        &self.forbidden
    }

    pub fn forbidden_len(&self) -> usize {
        self.forbidden.len()
    }

    /// Forbidden tuples in stored order.
    pub fn forbidden_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let k = self.arity();
        self.forbidden
            .iter()
            .map(move |&c| decode_tuple(c, self.d, k))
    }

    /// Whether `values` (ordered as the scope) is a forbidden tuple.
    pub fn is_forbidden(&self, values: &[usize]) -> bool {
        self.forbidden
            .binary_search(&encode_tuple(values, self.d))
            .is_ok()
    }

    /// Projection of a total assignment onto the scope, as a tuple code.
    pub fn project(&self, values: &[usize]) -> u64 {
        self.scope
            .iter()
            .fold(0u64, |acc, &v| acc * self.d as u64 + values[v] as u64)
    }

    pub fn allows(&self, values: &[usize]) -> bool {
        self.forbidden.binary_search(&self.project(values)).is_err()
    }
}

/// Number of tuples `d^k`, rejecting spaces that do not fit in 63 bits.
pub fn tuple_space(d: usize, k: usize) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..k {
        total = total
            .checked_mul(d as u64)
            .filter(|&t| t < 1 << 62)
            .ok_or_else(|| {
                Error::UnsupportedParameters(format!("tuple space d^k = {d}^{k} is too large"))
            })?;
    }
    Ok(total)
}

pub fn encode_tuple(values: &[usize], d: usize) -> u64 {
    values
        .iter()
        .fold(0u64, |acc, &v| acc * d as u64 + v as u64)
}

pub fn decode_tuple(mut code: u64, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = (code % d as u64) as usize;
        code /= d as u64;
    }
    out
}

/// `n` variables over the shared domain `[0, d)` with `k`-ary table constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    n: usize,
    d: usize,
    k: usize,
    constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(n: usize, d: usize, k: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if d == 0 {
            return Err(invalid("domain size must be >= 1"));
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.arity() != k {
                return Err(invalid(format!(
                    "constraint {i} has arity {}, instance declares k={k}",
                    c.arity()
                )));
            }
            if c.d != d {
                return Err(invalid(format!(
                    "constraint {i} uses domain size {}, instance declares d={d}",
                    c.d
                )));
            }
            if let Some(&v) = c.scope.iter().find(|&&v| v >= n) {
                return Err(invalid(format!(
                    "constraint {i} mentions variable {v}, instance has n={n}"
                )));
            }
        }
        Ok(Instance {
            n,
            d,
            k,
            constraints,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Copy of the instance with constraint `index` removed.
    pub fn without_constraint(&self, index: usize) -> Instance {
        let mut constraints = self.constraints.clone();
        constraints.remove(index);
        Instance {
            constraints,
            ..self.clone()
        }
    }

    /// `d^n` as a float, for size guards.
    pub fn search_space(&self) -> f64 {
        (self.d as f64).powi(self.n as i32)
    }
}

/// A total assignment of domain values to variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(values: Vec<usize>) -> Self {
        Assignment(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(values: Vec<usize>) -> Self {
        Assignment(values)
    }
}

/// True iff no constraint forbids the projection of `a` onto its scope.
pub fn satisfies(inst: &Instance, a: &Assignment) -> Result<bool> {
    if a.len() != inst.n {
        return Err(invalid(format!(
            "assignment has {} values, instance has {} variables",
            a.len(),
            inst.n
        )));
    }
    if let Some(&v) = a.values().iter().find(|&&v| v >= inst.d) {
        return Err(invalid(format!("value {v} outside domain [0,{})", inst.d)));
    }
    Ok(inst.constraints.iter().all(|c| c.allows(a.values())))
}

/// Fraction of positions at which two assignments differ.
pub fn distance(a: &Assignment, b: &Assignment) -> Result<f64> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "assignments have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(invalid("assignments are empty"));
    }
    let differ = a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count();
    Ok(differ as f64 / a.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Sat => f.write_str("SAT"),
            Status::Unsat => f.write_str("UNSAT"),
            Status::Timeout => f.write_str("TIMEOUT"),
        }
    }
}

/// Verdict and effort counters of one solver run.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: Status,
    pub witness: Option<Assignment>,
    pub nodes: u64,
    pub backtracks: u64,
    pub flips: u64,
    /// Number of solutions found when the search was asked to count them all.
    pub solutions: Option<u64>,
    pub elapsed: Duration,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}
