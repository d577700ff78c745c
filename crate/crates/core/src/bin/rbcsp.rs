//! Command-line front end.
//!
//! Any subcommand accepts `--config FILE`: a text file whose first line is
//! `rbcsp-config 1`, followed by `key = value` lines naming long flags.
//! Flags given on the command line take precedence over the file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rbcsp::analysis::{
    check_conditions, distance_profile, expected_solutions, forced_expected_solutions,
    p_critical, ProfileVariant,
};
use rbcsp::encode::{encode_direct, write_dimacs};
use rbcsp::experiments::{
    growth_slopes, hardness_growth, run_sweep_timed, survival_experiment, threshold_differences,
    write_growth_csv, write_survival_csv, write_sweep_csv, write_threshold_csv, HardnessAt,
    SolverKind, SweepSpec, Vary,
};
use rbcsp::io::{fmt_float, format_generated, params_line, read_instance, write_instance};
use rbcsp::mac::{solve_mac, SearchConfig};
use rbcsp::tabu::{solve_tabu, TabuConfig};
use rbcsp::{derive_dims, generate, sample_batch, InstanceParams, Model, Status};

const CONFIG_MAGIC: &str = "rbcsp-config";
const CONFIG_VERSION: u32 = 1;
const OUT_DIR_ENV: &str = "RBCSP_OUT_DIR";

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_TIMEOUT: u8 = 30;

#[derive(Parser)]
#[command(name = "rbcsp", version, about = "Random CSP generation, solving and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances.
    Gen(GenArgs),
    /// Solve an instance file; exit code 10 = SAT, 20 = UNSAT, 30 = TIMEOUT.
    Solve(SolveArgs),
    /// Threshold values, conditions, moments and distance profiles.
    Analyze(AnalyzeArgs),
    /// Direct encoding of an instance file as DIMACS CNF.
    Encode(EncodeArgs),
    /// Sweep one parameter and record satisfiability and cost.
    Sweep(SweepArgs),
    /// Locate the empirical threshold in p by bisection.
    Threshold(ThresholdArgs),
    /// Forced versus unforced cost as n grows.
    Growth(GrowthArgs),
    /// Runtime survival curve of randomized MAC on one instance.
    Survival(SurvivalArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// Versioned key = value file standing in for flags.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    r: f64,
    /// Tightness; defaults to the critical value 1 - exp(-alpha/r).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModelArg::Rb)]
    model: ModelArg,
    #[arg(long)]
    forced: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ParamArgs {
    fn params(&self) -> InstanceParams {
        let p = self.p.unwrap_or_else(|| p_critical(self.alpha, self.r));
        InstanceParams::new(self.k, self.n, self.alpha, self.r, p)
            .with_model(self.model.into())
            .with_forced(self.forced)
            .with_seed(self.seed)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Rb,
    Rd,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Rb => Model::Rb,
            ModelArg::Rd => Model::Rd,
        }
    }
}

#[derive(Args, Clone)]
struct MacArgs {
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    backtrack_limit: Option<u64>,
    /// Seconds of wall-clock time per search.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Break heuristic ties at random.
    #[arg(long)]
    randomized: bool,
    #[arg(long, default_value_t = 0)]
    tie_seed: u64,
}

impl MacArgs {
    fn config(&self) -> Result<SearchConfig> {
        let time_limit = match self.time_limit {
            Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
            Some(s) => bail!("time limit must be a positive number of seconds, got {s}"),
            None => None,
        };
        Ok(SearchConfig {
            node_limit: self.node_limit,
            backtrack_limit: self.backtrack_limit,
            time_limit,
            randomized: self.randomized,
            tie_seed: self.tie_seed,
            count_all: false,
        })
    }
}

#[derive(Args, Clone)]
struct TabuArgs {
    #[arg(long, default_value_t = 100_000)]
    max_flips: u64,
    #[arg(long, default_value_t = 10)]
    tenure: u64,
    /// Number of segments the flip budget is split into.
    #[arg(long, default_value_t = 1)]
    restarts: u64,
    #[arg(long, default_value_t = 0)]
    tabu_seed: u64,
    /// Disable constraint weighting.
    #[arg(long)]
    no_weights: bool,
    #[arg(long)]
    self_check: bool,
}

impl TabuArgs {
    fn config(&self) -> TabuConfig {
        TabuConfig {
            max_flips: self.max_flips,
            tabu_tenure: self.tenure,
            restarts: self.restarts,
            seed: self.tabu_seed,
            weight_learning: !self.no_weights,
            self_check: self.self_check,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output file, `-` for stdout. Defaults to a file in the output directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Output directory; falls back to $RBCSP_OUT_DIR, then the current directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl OutArgs {
    fn dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn target(&self, default_name: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| self.dir().join(default_name))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mac,
    Tabu,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Number of instances; instance i uses a seed derived from --seed and i.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output file for a single instance (`-` or absent: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Directory for batches; falls back to $RBCSP_OUT_DIR, then `.`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Mac)]
    method: Method,
    #[command(flatten)]
    mac: MacArgs,
    /// Count all solutions (MAC only).
    #[arg(long)]
    count: bool,
    #[command(flatten)]
    tabu: TabuArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Number of grid points for the distance profile.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Write the distance profile as CSV to this file (`-` for stdout).
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    instance: PathBuf,
    /// Omit the at-most-one clauses.
    #[arg(long)]
    no_amo: bool,
    /// Output file (`-` or absent: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value = "p")]
    vary: String,
    /// Comma-separated increasing values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Method::Mac)]
    solver: Method,
    /// Drop instances MAC does not prove satisfiable.
    #[arg(long)]
    filter_unsat: bool,
    /// Defaults to --seed.
    #[arg(long)]
    master_seed: Option<u64>,
    /// Add a mean_ms column (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    mac: MacArgs,
    #[command(flatten)]
    tabu: TabuArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Parameter varied across estimates: n, r or alpha.
    #[arg(long, default_value = "n")]
    vary: String,
    /// Comma-separated values; defaults to the base value of the varied parameter.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0.01)]
    tolerance: f64,
    /// The initial bracket is p_cr +- this width.
    #[arg(long, default_value_t = 0.1)]
    half_width: f64,
    #[command(flatten)]
    mac: MacArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct GrowthArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated increasing sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// `threshold`, `below:EPS` or `above:P`.
    #[arg(long, default_value = "below:0.01")]
    at: String,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Defaults to --seed.
    #[arg(long)]
    master_seed: Option<u64>,
    #[command(flatten)]
    mac: MacArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SurvivalArgs {
    #[command(flatten)]
    cfg: ConfigArg,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 500)]
    runs: usize,
    #[command(flatten)]
    mac: MacArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_hardness(s: &str) -> Result<HardnessAt> {
    match s.split_once(':') {
        None if s.eq_ignore_ascii_case("threshold") => Ok(HardnessAt::Threshold),
        Some((kind, v)) => {
            let v: f64 = v.parse().with_context(|| format!("bad number in `{s}`"))?;
            match kind.to_ascii_lowercase().as_str() {
                "below" => Ok(HardnessAt::Below(v)),
                "above" => Ok(HardnessAt::Above(v)),
                _ => bail!("unknown position `{kind}`"),
            }
        }
        None => bail!("expected threshold, below:EPS or above:P, got `{s}`"),
    }
}

/// Flags from a config file, in `--key value` form, skipping keys in `given`.
fn config_flags(path: &Path, given: &[String]) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, header)) => {
            let mut parts = header.split_whitespace();
            if parts.next() != Some(CONFIG_MAGIC) {
                bail!("{}: first line must be `{CONFIG_MAGIC} {CONFIG_VERSION}`", path.display());
            }
            let version = parts.next().unwrap_or("");
            if version != CONFIG_VERSION.to_string() || parts.next().is_some() {
                bail!("{}: unsupported config version `{version}`", path.display());
            }
        }
        None => bail!("{}: empty config", path.display()),
    }
    let mut flags = Vec::new();
    for (line, l) in lines {
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{line}: expected key = value", path.display()))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            bail!("{}:{line}: invalid key", path.display());
        }
        if given.contains(&key) {
            continue;
        }
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            _ => {
                flags.push(format!("--{key}"));
                let list: Vec<&str> = value.split(',').map(str::trim).collect();
                flags.push(list.join(","));
            }
        }
    }
    Ok(flags)
}

/// Splices the flags of any `--config FILE` in right after the subcommand
/// name. Keys also given on the command line are taken from the command line.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let given: Vec<String> = args
        .iter()
        .filter_map(|a| match a.as_str() {
            "-o" => Some("out".to_string()),
            _ => a.strip_prefix("--").map(|k| k.split('=').next().unwrap().to_string()),
        })
        .collect();
    let flags = config_flags(Path::new(&path), &given)?;
    let sub = args
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(args.len());
    let mut out = args[..sub].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[sub..]);
    Ok(out)
}

fn is_stdout(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) if !is_stdout(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn write_csv_output(path: &Path, bytes: &[u8]) -> Result<()> {
    write_output(Some(path), bytes)?;
    if !is_stdout(path) {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs) -> Result<u8> {
    let params = a.params.params();
    if a.count == 1 {
        let g = generate(&params)?;
        write_output(a.out.as_deref(), format_generated(&g).as_bytes())?;
        return Ok(0);
    }
    let dir = a
        .out_dir
        .clone()
        .or_else(|| a.out.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    for (i, g) in sample_batch(&params, a.count, params.seed)?.iter().enumerate() {
        write_instance(g, dir.join(format!("instance_{i:04}.rbcsp")))?;
    }
    eprintln!("wrote {} instances to {}", a.count, dir.display());
    Ok(0)
}

fn cmd_solve(a: &SolveArgs) -> Result<u8> {
    let file = read_instance(&a.instance)?;
    let inst = &file.instance;
    let out = match a.method {
        Method::Mac => {
            let cfg = SearchConfig {
                count_all: a.count,
                ..a.mac.config()?
            };
            solve_mac(inst, &cfg)?
        }
        Method::Tabu => {
            if a.count {
                bail!("--count needs --method mac");
            }
            solve_tabu(inst, &a.tabu.config())?
        }
    };
    println!("s {}", out.status);
    if let Some(w) = &out.witness {
        let vals: Vec<String> = w.values().iter().map(|v| v.to_string()).collect();
        println!("v {}", vals.join(" "));
    }
    if let Some(count) = out.solutions {
        println!("c solutions {count}");
    }
    match a.method {
        Method::Mac => println!("c nodes {} backtracks {}", out.nodes, out.backtracks),
        Method::Tabu => println!("c flips {}", out.flips),
    }
    println!("c time {:.6}", out.elapsed.as_secs_f64());
    Ok(match out.status {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::Timeout => EXIT_TIMEOUT,
    })
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<u8> {
    let params = a.params.params();
    params.validate()?;
    let rep = check_conditions(&params);
    println!("{}", params_line(&params));
    println!("p_cr {}", fmt_float(rep.p_cr));
    println!("r_cr {}", fmt_float(rep.r_cr));
    let c = rep.conditions_r;
    println!(
        "threshold_in_r k>=2={} alpha>1/k={} p<=(k-1)/k={} all={}",
        c.arity, c.alpha_above_inverse_k, c.tightness_bounded, c.all()
    );
    let c = rep.conditions_p;
    println!(
        "threshold_in_p k>=2={} alpha>1/k={} p_cr<=(k-1)/k={} all={} k*exp(-alpha/r)>=1={}",
        c.arity, c.alpha_above_inverse_k, c.tightness_bounded, c.all(), rep.k_exp_condition
    );
    match derive_dims(&params) {
        Ok(dims) => {
            println!("d {} m {}", dims.d, dims.m);
            println!("ln_expected_solutions {}", fmt_float(expected_solutions(&params, &dims)));
            println!(
                "ln_forced_expected_solutions {}",
                fmt_float(forced_expected_solutions(&params, &dims))
            );
        }
        Err(e) => println!("dims unavailable: {e}"),
    }
    if let Some(path) = &a.profile {
        let forced = distance_profile(&params, ProfileVariant::Forced, a.grid)?;
        let unforced = distance_profile(&params, ProfileVariant::Unforced, a.grid)?;
        println!("argmax forced {} unforced {}", fmt_float(forced.argmax()), fmt_float(unforced.argmax()));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["delta", "forced_exponent", "unforced_exponent"])?;
        for (f, u) in forced.grid.iter().zip(&unforced.grid) {
            w.write_record([fmt_float(f.0), fmt_float(f.1), fmt_float(u.1)])?;
        }
        write_output(Some(path), &w.into_inner()?)?;
    }
    Ok(0)
}

fn cmd_encode(a: &EncodeArgs) -> Result<u8> {
    let file = read_instance(&a.instance)?;
    let amo = !a.no_amo;
    let cnf = encode_direct(&file.instance, amo);
    let mut comments = vec![format!(
        "direct encoding n={} d={} k={} m={} amo={amo}",
        file.instance.n(),
        file.instance.d(),
        file.instance.k(),
        file.instance.m()
    )];
    if let Some(p) = &file.params {
        comments.push(params_line(p));
    }
    if let Some(t) = &file.forced_solution {
        let vals: Vec<String> = t.values().iter().map(|v| v.to_string()).collect();
        comments.push(format!("forced_solution {}", vals.join(" ")));
    }
    write_output(a.out.as_deref(), write_dimacs(&cnf, &comments).as_bytes())?;
    Ok(0)
}

fn cmd_sweep(a: &SweepArgs) -> Result<u8> {
    let base = a.params.params();
    let mut spec = SweepSpec::new(base, a.vary.parse()?, a.values.clone());
    spec.samples_per_point = a.samples;
    spec.solver = match a.solver {
        Method::Mac => SolverKind::Mac,
        Method::Tabu => SolverKind::Tabu,
    };
    spec.master_seed = a.master_seed.unwrap_or(base.seed);
    spec.filter_unsat = a.filter_unsat;
    spec.mac = a.mac.config()?;
    spec.tabu = a.tabu.config();
    let recs = run_sweep_timed(&spec, a.timing)?;
    let mut buf = Vec::new();
    write_sweep_csv(&recs, &mut buf)?;
    write_csv_output(&a.out.target("sweep.csv"), &buf)?;
    Ok(0)
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<u8> {
    let base = a.params.params();
    let vary: Vary = a.vary.parse()?;
    let values = if a.values.is_empty() {
        vec![match vary {
            Vary::N => base.n as f64,
            Vary::R => base.r,
            Vary::Alpha => base.alpha,
            Vary::P => bail!("the threshold is located in p; vary n, r or alpha"),
        }]
    } else {
        a.values.clone()
    };
    let rows = threshold_differences(
        &base,
        vary,
        &values,
        a.samples,
        a.tolerance,
        a.half_width,
        &a.mac.config()?,
    )?;
    for r in &rows {
        eprintln!(
            "{}: p_hat {} p_cr {}",
            fmt_float(r.value),
            fmt_float(r.estimate.p_hat),
            fmt_float(r.estimate.p_cr)
        );
    }
    let mut buf = Vec::new();
    write_threshold_csv(&rows, &mut buf)?;
    write_csv_output(&a.out.target("threshold.csv"), &buf)?;
    Ok(0)
}

fn cmd_growth(a: &GrowthArgs) -> Result<u8> {
    let base = a.params.params();
    let recs = hardness_growth(
        &base,
        &a.ns,
        parse_hardness(&a.at)?,
        a.samples,
        &a.mac.config()?,
        a.master_seed.unwrap_or(base.seed),
    )?;
    let (unforced, forced) = growth_slopes(&recs);
    eprintln!(
        "slope of ln(1 + mean backtracks) per unit n: unforced {} forced {}",
        fmt_float(unforced),
        fmt_float(forced)
    );
    let mut buf = Vec::new();
    write_growth_csv(&recs, &mut buf)?;
    write_csv_output(&a.out.target("growth.csv"), &buf)?;
    Ok(0)
}

fn cmd_survival(a: &SurvivalArgs) -> Result<u8> {
    let base = a.params.params();
    let rep = survival_experiment(&base, a.runs, &a.mac.config()?)?;
    match rep.tail_slope {
        Some(s) => eprintln!("tail slope {}", fmt_float(s)),
        None => eprintln!("tail slope unavailable"),
    }
    let mut buf = Vec::new();
    write_survival_csv(&rep, &mut buf)?;
    write_csv_output(&a.out.target("survival.csv"), &buf)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Growth(a) => cmd_growth(a),
        Command::Survival(a) => cmd_survival(a),
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
