//! Tabu search over total assignments with constraint weighting.
//!
//! A move changes the value of one variable occurring in a violated
//! constraint, choosing the move that most decreases the weighted number of
//! violated constraints. After a variable leaves value `a`, the pair
//! `(variable, a)` is tabu for `tabu_tenure` moves unless taking it reaches
//! fewer violations than ever seen. At a local minimum, every violated
//! constraint gains one unit of weight.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::model::{satisfies, Assignment, Instance, SolveOutcome, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TabuConfig {
    pub max_flips: u64,
    pub tabu_tenure: u64,
    /// Number of segments the flip budget is split into; each segment
    /// starts from a fresh random assignment.
    pub restarts: u64,
    pub seed: u64,
    pub weight_learning: bool,
    /// Recompute the evaluation from scratch every 1000 flips and check it
    /// against the incremental value.
    pub self_check: bool,
}

impl Default for TabuConfig {
    fn default() -> Self {
        TabuConfig {
            max_flips: 100_000,
            tabu_tenure: 10,
            restarts: 1,
            seed: 0,
            weight_learning: true,
            self_check: false,
        }
    }
}

struct Local<'a> {
    inst: &'a Instance,
    d: usize,
    values: Vec<usize>,
    incident: Vec<Vec<usize>>,
    weights: Vec<u64>,
    violated: Vec<bool>,
    /// Indices of violated constraints, with `slot[c]` their position.
    violated_list: Vec<usize>,
    slot: Vec<usize>,
    weighted: u64,
    tabu_until: Vec<u64>,
    rng: ChaCha8Rng,
}

impl<'a> Local<'a> {
    fn new(inst: &'a Instance, seed: u64) -> Self {
        let (n, d, m) = (inst.n(), inst.d(), inst.m());
        let mut incident = vec![Vec::new(); n];
        for (i, c) in inst.constraints().iter().enumerate() {
            for &v in c.scope() {
                incident[v].push(i);
            }
        }
        let mut local = Local {
            inst,
            d,
            values: vec![0; n],
            incident,
            weights: vec![1; m],
            violated: vec![false; m],
            violated_list: Vec::new(),
            slot: vec![usize::MAX; m],
            weighted: 0,
            tabu_until: vec![0; n * d],
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        local.randomize();
        local
    }

    fn randomize(&mut self) {
        for v in 0..self.values.len() {
            self.values[v] = self.rng.random_range(0..self.d);
        }
        self.tabu_until.iter_mut().for_each(|t| *t = 0);
        self.rebuild();
    }

    fn rebuild(&mut self) {
        self.violated_list.clear();
        self.weighted = 0;
        for (i, c) in self.inst.constraints().iter().enumerate() {
            let bad = !c.allows(&self.values);
            self.violated[i] = bad;
            self.slot[i] = usize::MAX;
            if bad {
                self.slot[i] = self.violated_list.len();
                self.violated_list.push(i);
                self.weighted += self.weights[i];
            }
        }
    }

    fn set_violated(&mut self, c: usize, bad: bool) {
        if self.violated[c] == bad {
            return;
        }
        self.violated[c] = bad;
        if bad {
            self.slot[c] = self.violated_list.len();
            self.violated_list.push(c);
            self.weighted += self.weights[c];
        } else {
            let at = self.slot[c];
            self.violated_list.swap_remove(at);
            if at < self.violated_list.len() {
                self.slot[self.violated_list[at]] = at;
            }
            self.slot[c] = usize::MAX;
            self.weighted -= self.weights[c];
        }
    }

    /// (weighted delta, violation-count delta) of setting `x = b`.
    fn delta(&mut self, x: usize, b: usize) -> (i64, i64) {
        let old = self.values[x];
        self.values[x] = b;
        let (mut dw, mut dv) = (0i64, 0i64);
        for &c in &self.incident[x] {
            let bad = !self.inst.constraints()[c].allows(&self.values);
            if bad != self.violated[c] {
                let sign = if bad { 1 } else { -1 };
                dw += sign * self.weights[c] as i64;
                dv += sign;
            }
        }
        self.values[x] = old;
        (dw, dv)
    }

    fn apply(&mut self, x: usize, b: usize) {
        self.values[x] = b;
        for i in 0..self.incident[x].len() {
            let c = self.incident[x][i];
            let bad = !self.inst.constraints()[c].allows(&self.values);
            self.set_violated(c, bad);
        }
    }

    fn check(&self) {
        let mut count = 0;
        let mut weighted = 0;
        for (i, c) in self.inst.constraints().iter().enumerate() {
            if !c.allows(&self.values) {
                count += 1;
                weighted += self.weights[i];
            }
        }
        assert_eq!(count, self.violated_list.len(), "violation count drifted");
        assert_eq!(weighted, self.weighted, "weighted cost drifted");
    }
}

pub fn solve_tabu(inst: &Instance, cfg: &TabuConfig) -> Result<SolveOutcome> {
    if cfg.max_flips == 0 {
        return Err(invalid("max_flips must be >= 1"));
    }
    let start = Instant::now();
    let segment = (cfg.max_flips / cfg.restarts.max(1)).max(1);
    let mut s = Local::new(inst, cfg.seed);
    let mut best = s.violated_list.len();
    let mut flips = 0u64;
    let mut conflict_mark = vec![false; inst.n()];
    let mut conflict_vars = Vec::new();

    while !s.violated_list.is_empty() && flips < cfg.max_flips {
        conflict_vars.clear();
        for &c in &s.violated_list {
            for &v in inst.constraints()[c].scope() {
                if !conflict_mark[v] {
                    conflict_mark[v] = true;
                    conflict_vars.push(v);
                }
            }
        }
        conflict_vars.sort_unstable();
        for &v in &conflict_vars {
            conflict_mark[v] = false;
        }

        let violations = s.violated_list.len() as i64;
        let mut chosen: Option<(usize, usize, i64)> = None;
        let mut ties = 0u32;
        for &x in &conflict_vars {
            for b in 0..s.d {
                if b == s.values[x] {
                    continue;
                }
                let (dw, dv) = s.delta(x, b);
                let tabu = s.tabu_until[x * s.d + b] > flips;
                if tabu && violations + dv >= best as i64 {
                    continue;
                }
                match chosen {
                    Some((_, _, bw)) if dw > bw => {}
                    Some((_, _, bw)) if dw == bw => {
                        ties += 1;
                        if s.rng.random_range(0..ties) == 0 {
                            chosen = Some((x, b, dw));
                        }
                    }
                    _ => {
                        chosen = Some((x, b, dw));
                        ties = 1;
                    }
                }
            }
        }
        let (x, b, dw) = match chosen {
            Some(mv) => mv,
            None => {
                let x = conflict_vars[s.rng.random_range(0..conflict_vars.len())];
                let mut b = s.rng.random_range(0..s.d - 1);
                if b >= s.values[x] {
                    b += 1;
                }
                (x, b, 0)
            }
        };
        if cfg.weight_learning && dw >= 0 {
            for i in 0..s.violated_list.len() {
                let c = s.violated_list[i];
                s.weights[c] += 1;
                s.weighted += 1;
            }
        }

        let old = s.values[x];
        s.tabu_until[x * s.d + old] = flips + 1 + cfg.tabu_tenure;
        s.apply(x, b);
        flips += 1;
        best = best.min(s.violated_list.len());

        if cfg.self_check && flips.is_multiple_of(1000) {
            s.check();
        }
        if !s.violated_list.is_empty() && flips.is_multiple_of(segment) && flips < cfg.max_flips {
            s.randomize();
            best = best.min(s.violated_list.len());
        }
    }

    let (status, witness) = if s.violated_list.is_empty() {
        let w = Assignment::new(s.values.clone());
        assert!(satisfies(inst, &w)?, "tabu search produced a non-solution");
        (Status::Sat, Some(w))
    } else {
        (Status::Timeout, None)
    };
    Ok(SolveOutcome {
        status,
        witness,
        nodes: 0,
        backtracks: 0,
        flips,
        solutions: None,
        elapsed: start.elapsed(),
    })
}
