//! Batch experiments: parameter sweeps, threshold estimation by bisection,
//! cost growth with `n` for forced versus unforced batches, and runtime
//! survival curves of randomized MAC.
//!
//! Every entry point is deterministic in its master seed. Point `i` of a
//! sweep draws its batch with seed `sub_seed(master, i)`; instances are
//! solved in parallel but aggregated in sample order. Timeouts never enter
//! the cost statistics and are always reported next to them.

use std::io::Write;

use rayon::prelude::*;

use crate::analysis::p_critical;
use crate::error::{invalid, Error, Result};
use crate::generator::{sample_batch, sub_seed, GeneratedInstance};
use crate::io::fmt_float;
use crate::mac::{solve_mac, survival, survival_runs, SearchConfig};
use crate::model::{InstanceParams, SolveOutcome, Status};
use crate::tabu::{solve_tabu, TabuConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vary {
    P,
    N,
    R,
    Alpha,
}

impl std::str::FromStr for Vary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Vary::P),
            "n" => Ok(Vary::N),
            "r" => Ok(Vary::R),
            "alpha" => Ok(Vary::Alpha),
            other => Err(invalid(format!("cannot vary `{other}` (use p, n, r or alpha)"))),
        }
    }
}

impl Vary {
    pub fn apply(self, base: &InstanceParams, value: f64) -> InstanceParams {
        let mut p = *base;
        match self {
            Vary::P => p.p = value,
            Vary::N => p.n = value.round() as usize,
            Vary::R => p.r = value,
            Vary::Alpha => p.alpha = value,
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Mac,
    Tabu,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: InstanceParams,
    pub vary: Vary,
    pub values: Vec<f64>,
    pub samples_per_point: usize,
    pub solver: SolverKind,
    pub master_seed: u64,
    /// Drop instances MAC does not prove satisfiable before measuring.
    pub filter_unsat: bool,
    pub mac: SearchConfig,
    pub tabu: TabuConfig,
}

impl SweepSpec {
    pub fn new(base: InstanceParams, vary: Vary, values: Vec<f64>) -> Self {
        SweepSpec {
            base,
            vary,
            values,
            samples_per_point: 50,
            solver: SolverKind::Mac,
            master_seed: base.seed,
            filter_unsat: false,
            mac: SearchConfig::default(),
            tabu: TabuConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(invalid("sweep needs at least one value"));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sweep values must be strictly increasing"));
        }
        if self.samples_per_point == 0 {
            return Err(invalid("samples_per_point must be >= 1"));
        }
        Ok(())
    }
}

/// Summary of a set of solver runs. Costs are backtracks for MAC and flips
/// for tabu search.
#[derive(Clone, Debug, PartialEq)]
pub struct CostStats {
    pub runs: usize,
    pub sat: usize,
    pub timeouts: usize,
    /// `sat / (runs - timeouts)`; NaN when every run timed out.
    pub sat_fraction: f64,
    pub mean_cost: f64,
    pub median_cost: f64,
    pub mean_nodes: f64,
}

impl CostStats {
    pub fn from_outcomes(outcomes: &[SolveOutcome], solver: SolverKind) -> Self {
        let decided: Vec<&SolveOutcome> = outcomes
            .iter()
            .filter(|o| o.status != Status::Timeout)
            .collect();
        let sat = decided.iter().filter(|o| o.status == Status::Sat).count();
        let costs: Vec<f64> = decided
            .iter()
            .map(|o| match solver {
                SolverKind::Mac => o.backtracks as f64,
                SolverKind::Tabu => o.flips as f64,
            })
            .collect();
        let nodes: Vec<f64> = decided.iter().map(|o| o.nodes as f64).collect();
        CostStats {
            runs: outcomes.len(),
            sat,
            timeouts: outcomes.len() - decided.len(),
            sat_fraction: if decided.is_empty() {
                f64::NAN
            } else {
                sat as f64 / decided.len() as f64
            },
            mean_cost: mean(&costs),
            median_cost: median(&costs),
            mean_nodes: mean(&nodes),
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Slope of `ln(1 + cost)` against `n`; the offset keeps zero-cost points finite.
pub fn fit_log_slope(ns: &[f64], costs: &[f64]) -> f64 {
    let ys: Vec<f64> = costs.iter().map(|c| c.ln_1p()).collect();
    fit_slope(ns, &ys)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub samples: usize,
    /// Instances removed by the satisfiability filter.
    pub filtered: usize,
    pub stats: CostStats,
    /// Mean wall-clock milliseconds per decided run; only filled when timing
    /// was requested, as it breaks byte-identical output.
    pub mean_ms: Option<f64>,
}

fn solve_one(
    g: &GeneratedInstance,
    solver: SolverKind,
    mac: &SearchConfig,
    tabu: &TabuConfig,
) -> Result<SolveOutcome> {
    match solver {
        SolverKind::Mac => solve_mac(&g.instance, mac),
        SolverKind::Tabu => {
            let cfg = TabuConfig {
                seed: sub_seed(tabu.seed, g.params.seed),
                ..*tabu
            };
            solve_tabu(&g.instance, &cfg)
        }
    }
}

/// Solves a batch in parallel, returning outcomes in batch order together
/// with the number of instances dropped by the filter.
fn solve_batch(
    batch: &[GeneratedInstance],
    solver: SolverKind,
    filter_unsat: bool,
    mac: &SearchConfig,
    tabu: &TabuConfig,
) -> Result<(Vec<SolveOutcome>, usize)> {
    let results: Vec<Option<SolveOutcome>> = batch
        .par_iter()
        .map(|g| {
            if filter_unsat && g.forced_solution.is_none() {
                let screen = solve_mac(&g.instance, mac)?;
                if screen.status != Status::Sat {
                    return Ok(None);
                }
            }
            solve_one(g, solver, mac, tabu).map(Some)
        })
        .collect::<Result<_>>()?;
    let filtered = results.iter().filter(|r| r.is_none()).count();
    Ok((results.into_iter().flatten().collect(), filtered))
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    run_sweep_timed(spec, false)
}

pub fn run_sweep_timed(spec: &SweepSpec, timing: bool) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    spec.values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let params = spec.vary.apply(&spec.base, value);
            let batch = sample_batch(
                &params,
                spec.samples_per_point,
                sub_seed(spec.master_seed, i as u64),
            )?;
            let (outcomes, filtered) =
                solve_batch(&batch, spec.solver, spec.filter_unsat, &spec.mac, &spec.tabu)?;
            let mean_ms = timing.then(|| {
                let ms: Vec<f64> = outcomes
                    .iter()
                    .filter(|o| o.status != Status::Timeout)
                    .map(|o| o.elapsed.as_secs_f64() * 1e3)
                    .collect();
                mean(&ms)
            });
            Ok(SweepRecord {
                value,
                samples: spec.samples_per_point,
                filtered,
                stats: CostStats::from_outcomes(&outcomes, spec.solver),
                mean_ms,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let timing = records.iter().any(|r| r.mean_ms.is_some());
    let mut header = vec![
        "value",
        "samples",
        "filtered",
        "sat",
        "timeouts",
        "sat_fraction",
        "mean_cost",
        "median_cost",
        "mean_nodes",
    ];
    if timing {
        header.push("mean_ms");
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            fmt_float(r.value),
            r.samples.to_string(),
            r.filtered.to_string(),
            r.stats.sat.to_string(),
            r.stats.timeouts.to_string(),
            fmt_float(r.stats.sat_fraction),
            fmt_float(r.stats.mean_cost),
            fmt_float(r.stats.median_cost),
            fmt_float(r.stats.mean_nodes),
        ];
        if timing {
            row.push(fmt_float(r.mean_ms.unwrap_or(f64::NAN)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of a bisection on `p` for the 50% satisfiability point.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdEstimate {
    pub p_hat: f64,
    pub p_cr: f64,
    /// Every `(p, sat_fraction)` evaluated, in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

fn sat_fraction_at(
    base: &InstanceParams,
    p: f64,
    samples: usize,
    cfg: &SearchConfig,
) -> Result<f64> {
    let batch = sample_batch(&base.with_p(p), samples, base.seed)?;
    let (outcomes, _) = solve_batch(&batch, SolverKind::Mac, false, cfg, &TabuConfig::default())?;
    Ok(CostStats::from_outcomes(&outcomes, SolverKind::Mac).sat_fraction)
}

/// Bisection on `p` inside `bracket` until the interval is narrower than
/// `tolerance`. Each evaluation sizes a fresh batch of `samples` unforced
/// instances with seed `base.seed`. A bracket whose ends do not straddle
/// 50% is widened once by its own width on each side, then rejected.
pub fn empirical_threshold(
    base: &InstanceParams,
    samples: usize,
    tolerance: f64,
    bracket: (f64, f64),
    cfg: &SearchConfig,
) -> Result<ThresholdEstimate> {
    if base.forced {
        return Err(invalid("threshold estimation needs unforced instances"));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(invalid("tolerance must be > 0"));
    }
    let (mut lo, mut hi) = bracket;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(invalid(format!("bad bracket ({lo}, {hi})")));
    }
    let mut evaluations = Vec::new();
    let eval = |p: f64, evaluations: &mut Vec<(f64, f64)>| -> Result<f64> {
        let f = sat_fraction_at(base, p, samples, cfg)?;
        evaluations.push((p, f));
        Ok(f)
    };

    let mut brackets = eval(lo, &mut evaluations)? >= 0.5 && eval(hi, &mut evaluations)? < 0.5;
    if !brackets {
        let width = hi - lo;
        lo = (lo - width).max(1e-6);
        hi = (hi + width).min(1.0 - 1e-6);
        brackets = eval(lo, &mut evaluations)? >= 0.5 && eval(hi, &mut evaluations)? < 0.5;
        if !brackets {
            return Err(Error::Bracket(format!(
                "satisfiable fraction does not cross 0.5 on [{lo}, {hi}]"
            )));
        }
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if eval(mid, &mut evaluations)? >= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdEstimate {
        p_hat: 0.5 * (lo + hi),
        p_cr: p_critical(base.alpha, base.r),
        evaluations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdDifference {
    pub value: f64,
    pub estimate: ThresholdEstimate,
}

/// Theoretical versus estimated threshold while one of `n`, `alpha`, `r`
/// varies; the bracket is centred on each point's `p_cr`.
pub fn threshold_differences(
    base: &InstanceParams,
    vary: Vary,
    values: &[f64],
    samples: usize,
    tolerance: f64,
    half_width: f64,
    cfg: &SearchConfig,
) -> Result<Vec<ThresholdDifference>> {
    if vary == Vary::P {
        return Err(invalid("the threshold is located in p; vary n, r or alpha"));
    }
    values
        .iter()
        .map(|&value| {
            let params = vary.apply(base, value);
            let p_cr = p_critical(params.alpha, params.r);
            let bracket = ((p_cr - half_width).max(1e-3), (p_cr + half_width).min(0.999));
            let estimate = empirical_threshold(&params, samples, tolerance, bracket, cfg)?;
            Ok(ThresholdDifference { value, estimate })
        })
        .collect()
}

pub fn write_threshold_csv<W: Write>(rows: &[ThresholdDifference], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["value", "p_cr", "p_hat", "difference", "evaluations"])?;
    for r in rows {
        w.write_record([
            fmt_float(r.value),
            fmt_float(r.estimate.p_cr),
            fmt_float(r.estimate.p_hat),
            fmt_float(r.estimate.p_hat - r.estimate.p_cr),
            r.estimate.evaluations.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Where the tightness sits for a growth experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HardnessAt {
    Threshold,
    /// `p_cr - epsilon`.
    Below(f64),
    /// A fixed `p` above `p_cr`.
    Above(f64),
}

impl HardnessAt {
    pub fn tightness(self, alpha: f64, r: f64) -> Result<f64> {
        let p_cr = p_critical(alpha, r);
        match self {
            HardnessAt::Threshold => Ok(p_cr),
            HardnessAt::Below(eps) if eps > 0.0 && eps < p_cr => Ok(p_cr - eps),
            HardnessAt::Above(p) if p > p_cr && p < 1.0 => Ok(p),
            other => Err(invalid(format!("{other:?} is not a valid tightness for p_cr = {p_cr}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRecord {
    pub n: usize,
    pub p: f64,
    pub forced: CostStats,
    pub unforced: CostStats,
}

/// Mean MAC cost of forced and unforced batches for each `n`.
/// Batch seeds: `sub_seed(master, 2i)` for unforced and `sub_seed(master, 2i+1)`
/// for forced instances at the `i`-th size.
pub fn hardness_growth(
    base: &InstanceParams,
    n_values: &[usize],
    at: HardnessAt,
    samples: usize,
    cfg: &SearchConfig,
    master_seed: u64,
) -> Result<Vec<GrowthRecord>> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n values must be non-empty and increasing"));
    }
    if samples == 0 {
        return Err(invalid("samples must be >= 1"));
    }
    let p = at.tightness(base.alpha, base.r)?;
    n_values
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let params = base.with_n(n).with_p(p);
            let mut stats = [false, true].into_iter().map(|forced| {
                let seed = sub_seed(master_seed, 2 * i as u64 + forced as u64);
                let batch = sample_batch(&params.with_forced(forced), samples, seed)?;
                let (outcomes, _) =
                    solve_batch(&batch, SolverKind::Mac, false, cfg, &TabuConfig::default())?;
                Ok::<_, Error>(CostStats::from_outcomes(&outcomes, SolverKind::Mac))
            });
            let unforced = stats.next().unwrap()?;
            let forced = stats.next().unwrap()?;
            Ok(GrowthRecord {
                n,
                p,
                forced,
                unforced,
            })
        })
        .collect()
}

/// Fitted slopes of `ln(1 + mean cost)` against `n`: (unforced, forced).
pub fn growth_slopes(records: &[GrowthRecord]) -> (f64, f64) {
    let ns: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let unforced: Vec<f64> = records.iter().map(|r| r.unforced.mean_cost).collect();
    let forced: Vec<f64> = records.iter().map(|r| r.forced.mean_cost).collect();
    (fit_log_slope(&ns, &unforced), fit_log_slope(&ns, &forced))
}

pub fn write_growth_csv<W: Write>(records: &[GrowthRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "p",
        "unforced_mean_cost",
        "forced_mean_cost",
        "unforced_median_cost",
        "forced_median_cost",
        "unforced_sat_fraction",
        "unforced_timeouts",
        "forced_timeouts",
    ])?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            fmt_float(r.p),
            fmt_float(r.unforced.mean_cost),
            fmt_float(r.forced.mean_cost),
            fmt_float(r.unforced.median_cost),
            fmt_float(r.forced.median_cost),
            fmt_float(r.unforced.sat_fraction),
            r.unforced.timeouts.to_string(),
            r.forced.timeouts.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalReport {
    pub params: InstanceParams,
    /// Backtracks of each run, in run order.
    pub runs: Vec<u64>,
    /// `(x, S(x))` at `x = 0` and at every distinct observed run length.
    pub curve: Vec<(u64, f64)>,
    /// Slope of `ln S` against `ln x` over the top decade of `x`.
    pub tail_slope: Option<f64>,
}

pub fn survival_curve(runs: &[u64]) -> Vec<(u64, f64)> {
    let mut xs: Vec<u64> = runs.to_vec();
    xs.push(0);
    xs.sort_unstable();
    xs.dedup();
    xs.into_iter().map(|x| (x, survival(runs, x))).collect()
}

/// Log-log slope of the survival curve over `x` in `[x_max / 10, x_max)`,
/// using only points with `x > 0` and `S(x) > 0`.
pub fn tail_slope(curve: &[(u64, f64)]) -> Option<f64> {
    let x_max = curve.iter().map(|p| p.0).max()? as f64;
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(x, s)| x > 0 && s > 0.0 && x as f64 >= x_max / 10.0)
        .map(|&(x, s)| ((x as f64).ln(), s.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Some(fit_slope(&xs, &ys))
}

/// One instance generated from `base`, then `runs` randomized MAC runs on it.
pub fn survival_experiment(
    base: &InstanceParams,
    runs: usize,
    cfg: &SearchConfig,
) -> Result<SurvivalReport> {
    let g = crate::generator::generate(base)?;
    let cfg = SearchConfig {
        randomized: true,
        ..*cfg
    };
    let lengths = survival_runs(&g.instance, runs, &cfg)?;
    let curve = survival_curve(&lengths);
    let slope = tail_slope(&curve);
    Ok(SurvivalReport {
        params: *base,
        runs: lengths,
        curve,
        tail_slope: slope,
    })
}

pub fn write_survival_csv<W: Write>(report: &SurvivalReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "survival"])?;
    for &(x, s) in &report.curve {
        w.write_record([x.to_string(), fmt_float(s)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robust_statistics() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
        assert!((fit_slope(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn survival_curve_shape() {
        let runs = [5, 1, 5, 9];
        let curve = survival_curve(&runs);
        assert_eq!(curve, vec![(0, 1.0), (1, 0.75), (5, 0.25), (9, 0.0)]);
        // pure power law S(x) = 1/x over a decade
        let synthetic: Vec<(u64, f64)> = (10..=100).map(|x| (x, 10.0 / x as f64)).collect();
        assert!((tail_slope(&synthetic).unwrap() + 1.0).abs() < 1e-9);
        assert!(tail_slope(&[(0, 1.0), (3, 0.0)]).is_none());
    }

    #[test]
    fn single_sample_sweep() {
        let base = InstanceParams::new(2, 8, 0.6, 1.0, 0.3);
        let mut spec = SweepSpec::new(base, Vary::P, vec![0.3]);
        spec.samples_per_point = 1;
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 1);
        let g = sample_batch(&base, 1, sub_seed(spec.master_seed, 0)).unwrap();
        let out = solve_mac(&g[0].instance, &SearchConfig::default()).unwrap();
        assert_eq!(recs[0].stats.mean_cost, out.backtracks as f64);
        assert_eq!(recs[0].stats.sat, out.is_sat() as usize);
    }

    #[test]
    fn sweep_spec_validation() {
        let base = InstanceParams::new(2, 8, 0.6, 1.0, 0.3);
        assert!(run_sweep(&SweepSpec::new(base, Vary::P, vec![])).is_err());
        assert!(run_sweep(&SweepSpec::new(base, Vary::P, vec![0.3, 0.2])).is_err());
    }

    #[test]
    fn tightness_choices() {
        let p_cr = p_critical(0.8, 1.5);
        assert_eq!(HardnessAt::Threshold.tightness(0.8, 1.5).unwrap(), p_cr);
        assert!((HardnessAt::Below(0.01).tightness(0.8, 1.5).unwrap() - (p_cr - 0.01)).abs() < 1e-15);
        assert!(HardnessAt::Above(0.3).tightness(0.8, 1.5).is_err());
        assert_eq!(HardnessAt::Above(0.5).tightness(0.8, 1.5).unwrap(), 0.5);
    }

    #[test]
    fn non_bracketing_interval_is_an_error() {
        // d = 2, d^k = 4: round(p * 4) = 0 for every p below 0.125
        let base = InstanceParams::new(2, 4, 0.5, 1.0, 0.01);
        let err = empirical_threshold(&base, 5, 0.01, (0.01, 0.02), &SearchConfig::default());
        assert!(matches!(err, Err(Error::Bracket(_))));
        assert!(empirical_threshold(&base.with_forced(true), 5, 0.01, (0.01, 0.02), &SearchConfig::default()).is_err());
    }
}
