//! Closed-form threshold locations, their applicability conditions, and
//! expected solution counts for forced and unforced instances.

use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::model::{DerivedDims, InstanceParams};

/// 1 - exp(-alpha / r): critical tightness for fixed `alpha`, `r`.
pub fn p_critical(alpha: f64, r: f64) -> f64 {
    -(-alpha / r).exp_m1()
}

/// -alpha / ln(1 - p): critical constraint density for fixed `alpha`, `p`.
pub fn r_critical(alpha: f64, p: f64) -> f64 {
    -alpha / (-p).ln_1p()
}

/// The three hypotheses under which the sharp threshold is guaranteed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub arity: bool,
    pub alpha_above_inverse_k: bool,
    pub tightness_bounded: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.arity && self.alpha_above_inverse_k && self.tightness_bounded
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdReport {
    pub p_cr: f64,
    pub r_cr: f64,
    /// Conditions for the threshold in `r` (tightness bound on `p`).
    pub conditions_r: Conditions,
    /// Conditions for the threshold in `p` (tightness bound on `p_cr`).
    pub conditions_p: Conditions,
    /// `k exp(-alpha/r) >= 1`, the alternative form of `p_cr <= (k-1)/k`.
    pub k_exp_condition: bool,
}

pub fn check_conditions(params: &InstanceParams) -> ThresholdReport {
    let k = params.k as f64;
    let p_cr = p_critical(params.alpha, params.r);
    let r_cr = r_critical(params.alpha, params.p);
    let bound = (k - 1.0) / k;
    let arity = params.k >= 2;
    let alpha_ok = params.alpha > 1.0 / k;
    let k_exp_condition = k * (-params.alpha / params.r).exp() >= 1.0;
    ThresholdReport {
        p_cr,
        r_cr,
        conditions_r: Conditions {
            arity,
            alpha_above_inverse_k: alpha_ok,
            tightness_bounded: params.p <= bound,
        },
        conditions_p: Conditions {
            arity,
            alpha_above_inverse_k: alpha_ok,
            tightness_bounded: p_cr <= bound,
        },
        k_exp_condition,
    }
}

/// ln E[N] = n ln d + m ln(1 - p).
pub fn expected_solutions(params: &InstanceParams, dims: &DerivedDims) -> f64 {
    params.n as f64 * (dims.d as f64).ln() + dims.m as f64 * (-params.p).ln_1p()
}

/// ln C(n, a): exact integer arithmetic up to n = 64, log-gamma beyond.
pub fn ln_binomial(n: usize, a: usize) -> f64 {
    if a > n {
        return f64::NEG_INFINITY;
    }
    if n <= 64 {
        let a = a.min(n - a);
        let mut c: u128 = 1;
        for i in 0..a {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        (c as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0) - ln_gamma(a as f64 + 1.0) - ln_gamma((n - a) as f64 + 1.0)
    }
}

/// C(n - a, k) / C(n, k): probability that a random k-scope avoids all `a`
/// marked variables.
fn untouched_scope_fraction(n: usize, a: usize, k: usize) -> f64 {
    if n - a < k {
        return 0.0;
    }
    (0..k).map(|i| (n - a - i) as f64 / (n - i) as f64).product()
}

/// Logarithm of the `a`-th term of the forced expected solution count: the
/// expected number of solutions differing from the forced one in exactly
/// `a` variables.
pub fn forced_distance_term(params: &InstanceParams, dims: &DerivedDims, a: usize) -> f64 {
    let n = params.n;
    let frac = untouched_scope_fraction(n, a, params.k);
    let q = frac + (1.0 - params.p) * (1.0 - frac);
    let spread = if a == 0 {
        0.0
    } else {
        a as f64 * ((dims.d - 1) as f64).ln()
    };
    ln_binomial(n, a) + spread + dims.m as f64 * q.ln()
}

/// ln E_f[N], the expected solution count of an instance forced to satisfy
/// a fixed assignment, summing [`forced_distance_term`] over all distances.
/// Exact under per-tuple independence (Model RD).
pub fn forced_expected_solutions(params: &InstanceParams, dims: &DerivedDims) -> f64 {
    let terms: Vec<f64> = (0..=params.n)
        .map(|a| forced_distance_term(params, dims, a))
        .collect();
    log_sum_exp(&terms)
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileVariant {
    Forced,
    Unforced,
}

/// Leading-order exponent (in units of `n ln n`) of the expected number of
/// solutions at distance `delta` from a reference assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceProfile {
    pub variant: ProfileVariant,
    pub grid: Vec<(f64, f64)>,
}

impl DistanceProfile {
    /// Grid point with the largest exponent (first one on ties).
    pub fn argmax(&self) -> f64 {
        self.grid
            .iter()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, &(delta, e)| {
                if e > best.1 {
                    (delta, e)
                } else {
                    best
                }
            })
            .0
    }
}

pub fn profile_exponent(params: &InstanceParams, variant: ProfileVariant, delta: f64) -> f64 {
    let (k, p, r, alpha) = (params.k as i32, params.p, params.r, params.alpha);
    match variant {
        ProfileVariant::Forced => r * (1.0 - p + p * (1.0 - delta).powi(k)).ln() + alpha * delta,
        ProfileVariant::Unforced => r * (-p).ln_1p() + alpha * delta,
    }
}

/// Exponent on a uniform grid over `[0, 1]`. When `grid_size >= n + 1` the
/// number of intervals is rounded up to a multiple of `n`, so that every
/// feasible distance `a / n` is a grid point.
pub fn distance_profile(
    params: &InstanceParams,
    variant: ProfileVariant,
    grid_size: usize,
) -> Result<DistanceProfile> {
    if grid_size < 3 {
        return Err(invalid(format!("grid_size must be >= 3, got {grid_size}")));
    }
    let mut intervals = grid_size - 1;
    if params.n > 0 && grid_size > params.n {
        intervals = intervals.div_ceil(params.n) * params.n;
    }
    let grid = (0..=intervals)
        .map(|i| {
            let delta = i as f64 / intervals as f64;
            (delta, profile_exponent(params, variant, delta))
        })
        .collect();
    Ok(DistanceProfile { variant, grid })
}
