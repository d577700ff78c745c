//! Seeded construction of Model RB / RD instances, optionally forced to
//! admit a pre-drawn solution.
//!
//! Every instance is a pure function of its [`InstanceParams`] (seed
//! included). The generator is ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`; its stream is identical on every platform.
//! Random draws are consumed in a fixed order: the forced assignment first
//! (one value per variable, in index order), then, per constraint, its scope
//! followed by its forbidden tuples.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    round_half_up, tuple_space, Assignment, Constraint, DerivedDims, Instance, InstanceParams,
    Model,
};

/// An instance together with the parameters and forced solution it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedInstance {
    pub params: InstanceParams,
    pub dims: DerivedDims,
    pub instance: Instance,
    pub forced_solution: Option<Assignment>,
}

/// `d = n^alpha` and `m = r n ln n`, both rounded half-up.
pub fn derive_dims(params: &InstanceParams) -> Result<DerivedDims> {
    params.validate()?;
    let n = params.n as f64;
    let d = round_half_up(n.powf(params.alpha));
    if d < 2 {
        return Err(Error::UnsupportedParameters(format!(
            "domain size round({}^{}) = {d} is below 2",
            params.n, params.alpha
        )));
    }
    let m = round_half_up(params.r * n * n.ln());
    if m < 1 {
        return Err(Error::UnsupportedParameters(format!(
            "constraint count round({} * {} ln {}) = 0",
            params.r, params.n, params.n
        )));
    }
    Ok(DerivedDims {
        d: d as usize,
        m: m as usize,
    })
}

/// Exact forbidden-set size for Model RB: `round(p d^k)`.
pub fn rb_tightness_count(p: f64, d: usize, k: usize) -> Result<u64> {
    let space = tuple_space(d, k)?;
    Ok(round_half_up(p * space as f64).min(space))
}

pub fn generate(params: &InstanceParams) -> Result<GeneratedInstance> {
    let dims = derive_dims(params)?;
    let (n, d, k) = (params.n, dims.d, params.k);
    let space = tuple_space(d, k)?;
    let rb_count = rb_tightness_count(params.p, d, k)?;
    if params.forced && params.model == Model::Rb && rb_count >= space {
        return Err(Error::InfeasibleForcing(format!(
            "round(p d^k) = {rb_count} leaves no room for the forced tuple (d^k = {space})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let forced_solution = params
        .forced
        .then(|| Assignment::new((0..n).map(|_| rng.random_range(0..d)).collect()));

    let mut vars: Vec<usize> = (0..n).collect();
    let mut constraints = Vec::with_capacity(dims.m);
    for _ in 0..dims.m {
        let scope = sample_scope(&mut rng, &mut vars, k);
        let skip = forced_solution
            .as_ref()
            .map(|t| scope.iter().fold(0u64, |acc, &v| acc * d as u64 + t.values()[v] as u64));
        let codes = match params.model {
            Model::Rb => sample_rb_codes(&mut rng, space, rb_count, skip),
            Model::Rd => sample_rd_codes(&mut rng, space, params.p, skip),
        };
        constraints.push(Constraint::from_codes(scope, codes, d)?);
    }

    let instance = Instance::new(n, d, k, constraints)?;
    Ok(GeneratedInstance {
        params: *params,
        dims,
        instance,
        forced_solution,
    })
}

/// Uniform `k`-subset of variables via a partial Fisher-Yates shuffle, sorted.
/// `vars` is a permutation of `0..n` on entry and remains one on exit.
fn sample_scope(rng: &mut ChaCha8Rng, vars: &mut [usize], k: usize) -> Vec<usize> {
    let n = vars.len();
    for i in 0..k {
        let j = rng.random_range(i..n);
        vars.swap(i, j);
    }
    let mut scope = vars[..k].to_vec();
    scope.sort_unstable();
    scope
}

/// Universe size below which the shuffle runs over an explicit index array.
const DENSE_SAMPLING_LIMIT: u64 = 1 << 16;

/// `count` distinct codes drawn uniformly from `[0, space)` minus `skip` by a
/// partial Fisher-Yates shuffle. Past `DENSE_SAMPLING_LIMIT` the displaced
/// slots live in a map, so memory stays O(count).
fn sample_rb_codes(rng: &mut ChaCha8Rng, space: u64, count: u64, skip: Option<u64>) -> Vec<u64> {
    let universe = if skip.is_some() { space - 1 } else { space };
    if universe <= DENSE_SAMPLING_LIMIT {
        let mut slots: Vec<u64> = (0..universe).collect();
        return (0..count as usize)
            .map(|i| {
                let j = rng.random_range(i as u64..universe) as usize;
                slots.swap(i, j);
                lift(slots[i], skip)
            })
            .collect();
    }
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        let j = rng.random_range(i..universe);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        out.push(lift(at_j, skip));
    }
    out
}

/// Maps an index of `[0, space - 1)` onto `[0, space) \ {skip}`.
fn lift(index: u64, skip: Option<u64>) -> u64 {
    match skip {
        Some(s) if index >= s => index + 1,
        _ => index,
    }
}

fn sample_rd_codes(rng: &mut ChaCha8Rng, space: u64, p: f64, skip: Option<u64>) -> Vec<u64> {
    (0..space)
        .filter(|&code| Some(code) != skip)
        .filter(|_| rng.random_bool(p))
        .collect()
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `master`.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// `count` instances with seeds `sub_seed(seed, i)`, in index order.
pub fn sample_batch(
    params: &InstanceParams,
    count: usize,
    seed: u64,
) -> Result<Vec<GeneratedInstance>> {
    if count == 0 {
        return Err(Error::InvalidArgument("batch count must be >= 1".into()));
    }
    (0..count)
        .into_par_iter()
        .map(|i| generate(&params.with_seed(sub_seed(seed, i as u64))))
        .collect()
}
