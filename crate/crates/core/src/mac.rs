//! Complete search: backtracking that maintains generalized arc consistency
//! (MAC) over forbidden-tuple tables, ordered by dom/wdeg, plus an
//! exhaustive enumerator used as an oracle.
//!
//! Branching is binary: `x = a` first, then `x != a` on failure. A node is
//! one attempted assignment `x = a`; a backtrack is one retraction of such
//! an assignment. A constraint's weight grows by one every time revising it
//! empties a domain.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::generator::sub_seed;
use crate::model::{satisfies, tuple_space, Assignment, Instance, SolveOutcome, Status};

/// Limits and options of one MAC run.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SearchConfig {
    pub node_limit: Option<u64>,
    pub backtrack_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Random value order and random tie-breaking between equally ranked
    /// variables, driven by `tie_seed`.
    pub randomized: bool,
    pub tie_seed: u64,
    /// Explore the whole space and report the number of solutions.
    pub count_all: bool,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.node_limit == Some(0) || self.backtrack_limit == Some(0) {
            return Err(invalid("search limits must be positive"));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(invalid("time limit must be positive"));
        }
        Ok(())
    }
}

/// Largest tuple space for which a constraint gets a dense bit table.
const DENSE_LIMIT: u64 = 1 << 24;

enum Forbidden {
    Dense(Vec<u64>),
    Sparse(Vec<u64>),
}

impl Forbidden {
    fn contains(&self, code: u64) -> bool {
        match self {
            Forbidden::Dense(bits) => bits[(code >> 6) as usize] >> (code & 63) & 1 == 1,
            Forbidden::Sparse(codes) => codes.binary_search(&code).is_ok(),
        }
    }
}

struct Table {
    scope: Vec<usize>,
    forbidden: Forbidden,
    /// Forbidden tuples with `scope[pos] = a`, at `pos * d + a`.
    forbidden_with: Vec<u64>,
    /// Last support found for `scope[pos] = a`, at `pos * d + a`.
    residue: Vec<u64>,
    /// Place value of each scope position in the tuple code.
    radix: Vec<u64>,
    /// Binary constraints only: bitset of the other variable's values
    /// compatible with `scope[pos] = a`, `words` words at `(pos * d + a) * words`.
    rows: Vec<u64>,
}

const NO_RESIDUE: u64 = u64::MAX;

impl Table {
    fn new(c: &crate::model::Constraint, d: usize, words: usize) -> Result<Self> {
        let k = c.arity();
        let space = tuple_space(d, k)?;
        let forbidden = if space <= DENSE_LIMIT {
            let mut bits = vec![0u64; (space as usize).div_ceil(64)];
            for &code in c.forbidden_codes() {
                bits[(code >> 6) as usize] |= 1 << (code & 63);
            }
            Forbidden::Dense(bits)
        } else {
            Forbidden::Sparse(c.forbidden_codes().to_vec())
        };
        let mut radix = vec![1u64; k];
        for pos in (0..k.saturating_sub(1)).rev() {
            radix[pos] = radix[pos + 1] * d as u64;
        }
        let mut forbidden_with = vec![0u64; k * d];
        for &code in c.forbidden_codes() {
            for pos in 0..k {
                let a = (code / radix[pos]) % d as u64;
                forbidden_with[pos * d + a as usize] += 1;
            }
        }
        let mut rows = Vec::new();
        if k == 2 {
            rows = vec![0u64; 2 * d * words];
            for a in 0..d {
                for b in 0..d {
                    let code = (a * d + b) as u64;
                    if !forbidden.contains(code) {
                        rows[a * words + b / 64] |= 1 << (b % 64);
                        rows[(d + b) * words + a / 64] |= 1 << (a % 64);
                    }
                }
            }
        }
        Ok(Table {
            rows,
            scope: c.scope().to_vec(),
            forbidden,
            forbidden_with,
            residue: vec![NO_RESIDUE; k * d],
            radix,
        })
    }
}

enum Flow {
    Continue,
    Stop,
    Abort,
}

struct Search<'a> {
    inst: &'a Instance,
    cfg: SearchConfig,
    d: usize,
    tables: Vec<Table>,
    incident: Vec<Vec<usize>>,
    /// Domain bitsets, `words` words per variable.
    dom: Vec<u64>,
    words: usize,
    size: Vec<usize>,
    assigned: Vec<bool>,
    trail: Vec<(usize, usize)>,
    weights: Vec<u64>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    /// The single variable whose change queued a constraint, if only one did.
    trigger: Vec<Option<usize>>,
    odometer: Vec<usize>,
    changed: Vec<usize>,
    rng: ChaCha8Rng,
    nodes: u64,
    backtracks: u64,
    solutions: u64,
    witness: Option<Assignment>,
    start: Instant,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, cfg: SearchConfig) -> Result<Self> {
        let (n, d) = (inst.n(), inst.d());
        let words = d.div_ceil(64);
        let tables = inst
            .constraints()
            .iter()
            .map(|c| Table::new(c, d, words))
            .collect::<Result<Vec<_>>>()?;
        let mut incident = vec![Vec::new(); n];
        for (i, t) in tables.iter().enumerate() {
            for &v in &t.scope {
                incident[v].push(i);
            }
        }
        Ok(Search {
            inst,
            cfg,
            d,
            weights: vec![1; tables.len()],
            queued: vec![false; tables.len()],
            trigger: vec![None; tables.len()],
            odometer: Vec::new(),
            changed: Vec::new(),
            tables,
            incident,
            dom: full_domains(n, d, words),
            words,
            size: vec![d; n],
            assigned: vec![false; n],
            trail: Vec::new(),
            queue: VecDeque::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.tie_seed),
            nodes: 0,
            backtracks: 0,
            solutions: 0,
            witness: None,
            start: Instant::now(),
        })
    }

    fn has(&self, x: usize, a: usize) -> bool {
        self.dom[x * self.words + a / 64] >> (a % 64) & 1 == 1
    }

    fn values(&self, x: usize) -> BitIter<'_> {
        BitIter::new(&self.dom[x * self.words..(x + 1) * self.words])
    }

    fn first(&self, x: usize) -> Option<usize> {
        self.values(x).next()
    }

    fn next_after(&self, x: usize, a: usize) -> Option<usize> {
        (a + 1..self.d).find(|&b| self.has(x, b))
    }

    fn remove(&mut self, x: usize, a: usize) {
        debug_assert!(self.has(x, a));
        self.dom[x * self.words + a / 64] &= !(1u64 << (a % 64));
        self.size[x] -= 1;
        self.trail.push((x, a));
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (x, a) = self.trail.pop().unwrap();
            self.dom[x * self.words + a / 64] |= 1 << (a % 64);
            self.size[x] += 1;
        }
    }

    fn supported(&mut self, c: usize, pos: usize, a: usize) -> bool {
        let d = self.d;
        let table = &self.tables[c];
        let k = table.scope.len();

        if k == 2 {
            let w = self.words;
            let y = table.scope[1 - pos];
            let row = &table.rows[(pos * d + a) * w..(pos * d + a + 1) * w];
            let dom = &self.dom[y * w..(y + 1) * w];
            return row.iter().zip(dom).any(|(r, s)| r & s != 0);
        }

        let mut room: u64 = 1;
        for (i, &y) in table.scope.iter().enumerate() {
            if i != pos {
                room = room.saturating_mul(self.size[y] as u64);
            }
        }
        if room > table.forbidden_with[pos * d + a] {
            return true;
        }
        if room == 0 {
            return false;
        }

        let res = table.residue[pos * d + a];
        if res != NO_RESIDUE
            && table
                .scope
                .iter()
                .enumerate()
                .all(|(i, &y)| self.has(y, ((res / table.radix[i]) % d as u64) as usize))
        {
            return true;
        }

        // odometer over the current domains of the other scope variables
        let mut idx = std::mem::take(&mut self.odometer);
        idx.clear();
        idx.resize(k, 0);
        for (i, &y) in table.scope.iter().enumerate() {
            if i != pos {
                idx[i] = self.first(y).unwrap();
            } else {
                idx[i] = a;
            }
        }
        let found = loop {
            let code: u64 = (0..k).map(|i| idx[i] as u64 * table.radix[i]).sum();
            if !table.forbidden.contains(code) {
                break Some(code);
            }
            let mut i = k;
            let more = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if i == pos {
                    continue;
                }
                let y = table.scope[i];
                match self.next_after(y, idx[i]) {
                    Some(b) => {
                        idx[i] = b;
                        break true;
                    }
                    None => idx[i] = self.first(y).unwrap(),
                }
            };
            if !more {
                break None;
            }
        };
        self.odometer = idx;
        match found {
            Some(code) => {
                self.tables[c].residue[pos * d + a] = code;
                true
            }
            None => false,
        }
    }

    /// Revises `c` to a fixpoint, skipping the scope position `skip` on the
    /// first pass. Returns false on a domain wipeout.
    fn revise(&mut self, c: usize, mut skip: Option<usize>, changed: &mut Vec<usize>) -> bool {
        let k = self.tables[c].scope.len();
        loop {
            let mut last_removed = None;
            let mut removed_positions = 0;
            for pos in 0..k {
                if Some(pos) == skip {
                    continue;
                }
                let x = self.tables[c].scope[pos];
                let mut removed = false;
                for w in 0..self.words {
                    let mut bits = self.dom[x * self.words + w];
                    while bits != 0 {
                        let a = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if !self.supported(c, pos, a) {
                            self.remove(x, a);
                            removed = true;
                        }
                    }
                }
                if removed {
                    if self.size[x] == 0 {
                        self.weights[c] += 1;
                        return false;
                    }
                    changed.push(x);
                    last_removed = Some(pos);
                    removed_positions += 1;
                }
            }
            match removed_positions {
                0 => return true,
                1 => skip = last_removed,
                _ => skip = None,
            }
        }
    }

    fn enqueue_var(&mut self, x: usize, except: Option<usize>) {
        for i in 0..self.incident[x].len() {
            let c = self.incident[x][i];
            if Some(c) == except {
                continue;
            }
            if self.queued[c] {
                if self.trigger[c] != Some(x) {
                    self.trigger[c] = None;
                }
            } else {
                self.queued[c] = true;
                self.trigger[c] = Some(x);
                self.queue.push_back(c);
            }
        }
    }

    fn propagate(&mut self) -> bool {
        let mut changed = std::mem::take(&mut self.changed);
        let mut ok = true;
        while let Some(c) = self.queue.pop_front() {
            self.queued[c] = false;
            let skip = self.trigger[c]
                .and_then(|x| self.tables[c].scope.iter().position(|&v| v == x));
            changed.clear();
            if !self.revise(c, skip, &mut changed) {
                for c in self.queue.drain(..) {
                    self.queued[c] = false;
                }
                ok = false;
                break;
            }
            changed.sort_unstable();
            changed.dedup();
            for &x in &changed {
                self.enqueue_var(x, Some(c));
            }
        }
        self.changed = changed;
        ok
    }

    fn wdeg(&self, x: usize) -> u64 {
        self.incident[x]
            .iter()
            .filter(|&&c| {
                self.tables[c]
                    .scope
                    .iter()
                    .any(|&y| y != x && !self.assigned[y])
            })
            .map(|&c| self.weights[c])
            .sum()
    }

    /// Unassigned variable minimising dom/wdeg.
    fn select(&mut self) -> Option<usize> {
        let mut best: Option<(usize, usize, u64)> = None;
        let mut ties = 0u32;
        for x in 0..self.inst.n() {
            if self.assigned[x] {
                continue;
            }
            let (dom, w) = (self.size[x], self.wdeg(x));
            let ord = match best {
                None => std::cmp::Ordering::Less,
                Some((_, bd, bw)) => compare_ratio(dom, w, bd, bw),
            };
            match ord {
                std::cmp::Ordering::Less => {
                    best = Some((x, dom, w));
                    ties = 1;
                }
                std::cmp::Ordering::Equal if self.cfg.randomized => {
                    ties += 1;
                    if self.rng.random_range(0..ties) == 0 {
                        best = Some((x, dom, w));
                    }
                }
                _ => {}
            }
        }
        best.map(|b| b.0)
    }

    fn pick_value(&mut self, x: usize) -> usize {
        let nth = if self.cfg.randomized {
            self.rng.random_range(0..self.size[x])
        } else {
            0
        };
        self.values(x).nth(nth).unwrap()
    }

    fn over_limit(&self) -> bool {
        if self.cfg.node_limit.is_some_and(|l| self.nodes > l) {
            return true;
        }
        if self.cfg.backtrack_limit.is_some_and(|l| self.backtracks > l) {
            return true;
        }
        if let Some(limit) = self.cfg.time_limit {
            if self.nodes.is_multiple_of(256) && self.start.elapsed() > limit {
                return true;
            }
        }
        false
    }

    fn record_solution(&mut self) -> Flow {
        self.solutions += 1;
        if self.witness.is_none() {
            let values: Vec<usize> = (0..self.inst.n())
                .map(|x| self.first(x).unwrap())
                .collect();
            let w = Assignment::new(values);
            assert!(
                satisfies(self.inst, &w).unwrap_or(false),
                "MAC produced a non-solution"
            );
            self.witness = Some(w);
        }
        if self.cfg.count_all {
            Flow::Continue
        } else {
            Flow::Stop
        }
    }

    fn branch(&mut self) -> Flow {
        let mark = self.trail.len();
        let flow = loop {
            if self.over_limit() {
                break Flow::Abort;
            }
            let Some(x) = self.select() else {
                break self.record_solution();
            };
            let a = self.pick_value(x);
            self.nodes += 1;

            let inner = self.trail.len();
            for b in 0..self.d {
                if b != a && self.has(x, b) {
                    self.remove(x, b);
                }
            }
            self.assigned[x] = true;
            self.enqueue_var(x, None);
            if self.propagate() {
                match self.branch() {
                    Flow::Continue => {}
                    other => break other,
                }
            }
            self.undo(inner);
            self.assigned[x] = false;
            self.backtracks += 1;

            self.remove(x, a);
            if self.size[x] == 0 {
                break Flow::Continue;
            }
            self.enqueue_var(x, None);
            if !self.propagate() {
                break Flow::Continue;
            }
        };
        if matches!(flow, Flow::Continue) {
            self.undo(mark);
        }
        flow
    }

    fn run(mut self) -> SolveOutcome {
        for c in 0..self.tables.len() {
            self.queued[c] = true;
            self.queue.push_back(c);
        }
        let flow = if self.propagate() {
            self.branch()
        } else {
            Flow::Continue
        };
        let status = match flow {
            Flow::Abort => Status::Timeout,
            _ if self.solutions > 0 => Status::Sat,
            _ => Status::Unsat,
        };
        SolveOutcome {
            status,
            witness: self.witness,
            nodes: self.nodes,
            backtracks: self.backtracks,
            flips: 0,
            solutions: self.cfg.count_all.then_some(self.solutions),
            elapsed: self.start.elapsed(),
        }
    }
}

fn full_domains(n: usize, d: usize, words: usize) -> Vec<u64> {
    let mut one = vec![u64::MAX; words];
    if !d.is_multiple_of(64) {
        one[words - 1] = (1u64 << (d % 64)) - 1;
    }
    one.iter().copied().cycle().take(n * words).collect()
}

struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * 64 + bit)
    }
}

/// Orders `dom_a / w_a` against `dom_b / w_b`; zero weight ranks last.
fn compare_ratio(dom_a: usize, w_a: u64, dom_b: usize, w_b: u64) -> std::cmp::Ordering {
    match (w_a, w_b) {
        (0, 0) => dom_a.cmp(&dom_b),
        (0, _) => std::cmp::Ordering::Greater,
        (_, 0) => std::cmp::Ordering::Less,
        _ => (dom_a as u128 * w_b as u128).cmp(&(dom_b as u128 * w_a as u128)),
    }
}

pub fn solve_mac(inst: &Instance, cfg: &SearchConfig) -> Result<SolveOutcome> {
    cfg.validate()?;
    Ok(Search::new(inst, *cfg)?.run())
}

/// Largest `d^n` the exhaustive enumerator accepts.
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

/// Exact solution count by enumerating all assignments in lexicographic
/// order, checking each constraint once its last variable is set.
pub fn brute_force(inst: &Instance) -> Result<(Status, u64)> {
    if inst.search_space() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "d^n = {}^{} exceeds {BRUTE_FORCE_LIMIT:e}",
            inst.d(),
            inst.n()
        )));
    }
    let n = inst.n();
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in inst.constraints().iter().enumerate() {
        closing[*c.scope().last().unwrap()].push(i);
    }
    let mut values = vec![0usize; n];
    let count = enumerate(inst, &closing, &mut values, 0);
    let status = if count > 0 { Status::Sat } else { Status::Unsat };
    Ok((status, count))
}

fn enumerate(inst: &Instance, closing: &[Vec<usize>], values: &mut [usize], depth: usize) -> u64 {
    if depth == values.len() {
        return 1;
    }
    let mut count = 0;
    for a in 0..inst.d() {
        values[depth] = a;
        if closing[depth]
            .iter()
            .all(|&c| inst.constraints()[c].allows(values))
        {
            count += enumerate(inst, closing, values, depth + 1);
        }
    }
    count
}

/// Backtrack counts of `runs` randomized searches on one instance; run `i`
/// uses tie seed `sub_seed(cfg.tie_seed, i)`.
pub fn survival_runs(inst: &Instance, runs: usize, cfg: &SearchConfig) -> Result<Vec<u64>> {
    if !cfg.randomized {
        return Err(invalid("survival runs need a randomized search"));
    }
    if runs == 0 {
        return Err(invalid("runs must be >= 1"));
    }
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let run_cfg = SearchConfig {
                tie_seed: sub_seed(cfg.tie_seed, i as u64),
                count_all: false,
                ..*cfg
            };
            solve_mac(inst, &run_cfg).map(|o| o.backtracks)
        })
        .collect()
}

/// Fraction of runs with more than `x` backtracks.
pub fn survival(runs: &[u64], x: u64) -> f64 {
    runs.iter().filter(|&&b| b > x).count() as f64 / runs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Constraint;

    fn full_cfg() -> SearchConfig {
        SearchConfig {
            count_all: true,
            ..Default::default()
        }
    }

    #[test]
    fn no_constraints_is_immediately_sat() {
        let inst = Instance::new(4, 3, 2, vec![]).unwrap();
        let out = solve_mac(&inst, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Sat);
        assert_eq!(out.backtracks, 0);
        assert_eq!(brute_force(&inst).unwrap(), (Status::Sat, 81));
        let out = solve_mac(&inst, &full_cfg()).unwrap();
        assert_eq!(out.solutions, Some(81));
    }

    #[test]
    fn full_table_is_unsat() {
        let all: Vec<Vec<usize>> = (0..3).flat_map(|a| (0..3).map(move |b| vec![a, b])).collect();
        let c = Constraint::new(vec![0, 1], all, 3).unwrap();
        let inst = Instance::new(3, 3, 2, vec![c]).unwrap();
        let out = solve_mac(&inst, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Unsat);
        assert!(out.witness.is_none());
        assert_eq!(brute_force(&inst).unwrap(), (Status::Unsat, 0));
    }

    #[test]
    fn single_full_arity_constraint_count() {
        // k = n: every forbidden tuple removes exactly one assignment
        let c = Constraint::new(vec![0, 1], vec![vec![0, 0], vec![1, 2], vec![2, 1]], 3).unwrap();
        let inst = Instance::new(2, 3, 2, vec![c]).unwrap();
        assert_eq!(brute_force(&inst).unwrap().1, 9 - 3);
        assert_eq!(solve_mac(&inst, &full_cfg()).unwrap().solutions, Some(6));
    }

    /// x0 != x1, x1 != x2 and x0 != x2 over {0,1}: unsat, but every binary
    /// constraint alone is arc consistent.
    #[test]
    fn gac_keeps_supported_values() {
        let neq = |a: usize, b: usize| Constraint::new(vec![a, b], vec![vec![0, 0], vec![1, 1]], 2).unwrap();
        let inst = Instance::new(3, 2, 2, vec![neq(0, 1), neq(1, 2), neq(0, 2)]).unwrap();
        let mut s = Search::new(&inst, SearchConfig::default()).unwrap();
        for c in 0..3 {
            s.queued[c] = true;
            s.queue.push_back(c);
        }
        assert!(s.propagate());
        assert!(s.size.iter().all(|&sz| sz == 2));
        assert_eq!(solve_mac(&inst, &SearchConfig::default()).unwrap().status, Status::Unsat);

        // x0 = x1 forced by forbidding the two unequal pairs, plus x0 != 1
        let eq = Constraint::new(vec![0, 1], vec![vec![0, 1], vec![1, 0]], 2).unwrap();
        let not_one = Constraint::new(vec![0, 2], vec![vec![1, 0], vec![1, 1]], 2).unwrap();
        let inst = Instance::new(3, 2, 2, vec![eq, not_one]).unwrap();
        let mut s = Search::new(&inst, SearchConfig::default()).unwrap();
        for c in 0..2 {
            s.queued[c] = true;
            s.queue.push_back(c);
        }
        assert!(s.propagate());
        assert!(s.has(0, 0) && !s.has(0, 1));
        assert!(s.has(1, 0) && !s.has(1, 1));
        assert_eq!(s.size[2], 2);
    }

    #[test]
    fn ternary_gac_prunes_unsupported_value() {
        // every tuple with x0 = 1 is forbidden
        let tuples: Vec<Vec<usize>> = (0..2).flat_map(|b| (0..2).map(move |c| vec![1, b, c])).collect();
        let c = Constraint::new(vec![0, 1, 2], tuples, 2).unwrap();
        let inst = Instance::new(3, 2, 3, vec![c]).unwrap();
        let out = solve_mac(&inst, &full_cfg()).unwrap();
        assert_eq!(out.solutions, Some(4));
        assert_eq!(out.witness.unwrap().values()[0], 0);
    }

    #[test]
    fn limits_produce_timeout() {
        let inst = Instance::new(8, 3, 2, vec![]).unwrap();
        let cfg = SearchConfig {
            node_limit: Some(5),
            count_all: true,
            ..Default::default()
        };
        let out = solve_mac(&inst, &cfg).unwrap();
        assert_eq!(out.status, Status::Timeout);
        let bad = SearchConfig {
            backtrack_limit: Some(0),
            ..Default::default()
        };
        assert!(solve_mac(&inst, &bad).is_err());
    }

    #[test]
    fn brute_force_guard() {
        let inst = Instance::new(30, 10, 2, vec![]).unwrap();
        assert!(matches!(brute_force(&inst), Err(Error::TooLarge(_))));
    }

    #[test]
    fn ratio_ordering() {
        use std::cmp::Ordering::*;
        assert_eq!(compare_ratio(2, 4, 3, 4), Less);
        assert_eq!(compare_ratio(2, 2, 4, 4), Equal);
        assert_eq!(compare_ratio(1, 0, 9, 1), Greater);
    }

    #[test]
    fn survival_needs_randomization() {
        let inst = Instance::new(3, 2, 2, vec![]).unwrap();
        assert!(survival_runs(&inst, 3, &SearchConfig::default()).is_err());
        let cfg = SearchConfig {
            randomized: true,
            ..Default::default()
        };
        assert_eq!(survival_runs(&inst, 1, &cfg).unwrap().len(), 1);
    }
}
