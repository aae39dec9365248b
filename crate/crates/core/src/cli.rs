//! Command-line front end: configuration, experiment orchestration and
//! machine-readable output.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 property violation. Every
//! randomized command takes an explicit `--seed` or falls back to the fixed
//! default [`DEFAULT_SEED`]; wall-clock seeding is never used.

use crate::analytic::{self, closed_form_gamma_one_plus_two, enumerate, expectations, Threshold};
use crate::cycle::CSV_HEADER;
use crate::difficulty::EPOCH_CSV_HEADER;
use crate::params::{NetworkParams, DEFAULT_N0, DEFAULT_TAU0};
use crate::report::Variant;
use crate::simulator::{self, DaaVariant};
use crate::strategy::Strategy;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 20140901;
pub const EXIT_CONFIG_ERROR: i32 = 2;
pub const EXIT_PROPERTY_VIOLATION: i32 = 3;

/// Margin tolerance when checking exact dominance rows.
const DOMINANCE_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "blockrace",
    about = "Block-withholding mining strategies: exact analytics and Monte Carlo simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact per-cycle expectations and dominance margins over a q-grid.
    Analytic(AnalyticArgs),
    /// Smallest q where the strategy beats honest mining, by bisection.
    Threshold(ThresholdArgs),
    /// Monte Carlo simulation: constant-difficulty cycles, long runs with
    /// retargeting, martingale and rate-bound diagnostics.
    Simulate(SimulateArgs),
    /// Exact vs Monte Carlo profitability over a q-grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Default)]
struct CommonArgs {
    /// Flat key=value config file; explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Strategy: "honest", "one-plus-two", or a word-rule file path.
    #[arg(long)]
    strategy: Option<String>,
    /// Attacker relative hashrate in (0,1).
    #[arg(long)]
    q: Option<f64>,
    /// Grid start:end:step, e.g. 0.05:0.45:0.05.
    #[arg(long)]
    q_grid: Option<String>,
    /// Protocol variant: standard | orphan.
    #[arg(long)]
    variant: Option<String>,
    /// Orphan reward fraction x in [0,1].
    #[arg(long)]
    x: Option<f64>,
    /// Target interblock time, minutes.
    #[arg(long)]
    tau0: Option<f64>,
    /// Retargeting window in official blocks.
    #[arg(long)]
    n0: Option<u32>,
    /// Master seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file for the primary report (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// Rayon worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct AnalyticArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of Monte Carlo cycles.
    #[arg(long)]
    cycles: Option<u64>,
    /// Per-cycle CSV output path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Long-run mode: epochs with difficulty retargeting.
    #[arg(long)]
    longrun: bool,
    /// Epochs per replication (long-run mode).
    #[arg(long)]
    epochs: Option<u32>,
    /// Warmup epochs excluded from estimates.
    #[arg(long)]
    warmup: Option<u32>,
    /// Independent replications averaged in long-run mode.
    #[arg(long)]
    replications: Option<u32>,
    /// Per-epoch CSV output path (long-run mode).
    #[arg(long)]
    epoch_csv: Option<PathBuf>,
    /// Check the stopping-time identity E[N'] = alpha' E[tau].
    #[arg(long)]
    martingale: bool,
    /// Check the constant-difficulty bound E[G]/E[tau] <= q/tau0.
    #[arg(long)]
    no_daa_check: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monte Carlo cycles per grid point.
    #[arg(long)]
    cycles: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Violation(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Violation(msg) => write!(f, "property violation: {msg}"),
        }
    }
}

impl From<crate::error::Error> for CliError {
    fn from(err: crate::error::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` and runs the selected command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version itself; real parse failures are
            // configuration errors
            let _ = err.print();
            return if err.use_stderr() {
                EXIT_CONFIG_ERROR
            } else {
                0
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG_ERROR
        }
        Err(CliError::Violation(msg)) => {
            eprintln!("violation: {msg}");
            EXIT_PROPERTY_VIOLATION
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analytic(args) => cmd_analytic(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Effective configuration after merging CLI flags over config-file values.
#[derive(Debug, Clone)]
struct Config {
    strategy: String,
    q_values: Vec<f64>,
    variant: Variant,
    x: f64,
    tau0: f64,
    n0: u32,
    seed: u64,
    out: Option<PathBuf>,
    json: bool,
    workers: Option<usize>,
    file: HashMap<String, String>,
}

impl Config {
    fn from_common(common: &CommonArgs) -> CliResult<Config> {
        let file = match &common.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let lookup = |key: &str| file.get(key).cloned();
        let parse_file = |key: &str| -> CliResult<Option<f64>> {
            match lookup(key) {
                Some(v) => v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| CliError::Config(format!("invalid {key} in config: {v}"))),
                None => Ok(None),
            }
        };

        let strategy = common
            .strategy
            .clone()
            .or_else(|| lookup("strategy"))
            .unwrap_or_else(|| "honest".to_string());
        let q = match common.q {
            Some(q) => Some(q),
            None => parse_file("q")?,
        };
        let q_grid = common.q_grid.clone().or_else(|| lookup("q_grid"));
        let q_values = match (q, q_grid) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either --q or --q-grid, not both".into(),
                ))
            }
            (Some(q), None) => vec![q],
            (None, Some(spec)) => parse_grid(&spec)?,
            (None, None) => return Err(CliError::Config("missing --q or --q-grid".into())),
        };
        let variant_name = common
            .variant
            .clone()
            .or_else(|| lookup("variant"))
            .unwrap_or_else(|| "standard".to_string());
        let variant = match variant_name.as_str() {
            "standard" => Variant::Standard,
            "orphan" | "modified" => Variant::Orphan,
            other => return Err(CliError::Config(format!("unknown variant {other:?}"))),
        };
        let x = match common.x {
            Some(x) => x,
            None => parse_file("x")?.unwrap_or(0.0),
        };
        let tau0 = match common.tau0 {
            Some(t) => t,
            None => parse_file("tau0")?.unwrap_or(DEFAULT_TAU0),
        };
        let n0 = match common.n0 {
            Some(n) => n,
            None => match lookup("n0") {
                Some(v) => v
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid n0 in config: {v}")))?,
                None => DEFAULT_N0,
            },
        };
        let seed = match common.seed {
            Some(s) => s,
            None => match lookup("seed") {
                Some(v) => v
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid seed in config: {v}")))?,
                None => DEFAULT_SEED,
            },
        };
        let out = common
            .out
            .clone()
            .or_else(|| lookup("out").map(PathBuf::from));
        let format = common
            .format
            .clone()
            .or_else(|| lookup("format"))
            .unwrap_or_else(|| "csv".to_string());
        let json = match format.as_str() {
            "csv" => false,
            "json" => true,
            other => return Err(CliError::Config(format!("unknown format {other:?}"))),
        };
        Ok(Config {
            strategy,
            q_values,
            variant,
            x,
            tau0,
            n0,
            seed,
            out,
            json,
            workers: common.workers,
            file,
        })
    }

    fn params(&self, q: f64) -> CliResult<NetworkParams> {
        Ok(NetworkParams::new(q)?
            .with_tau0(self.tau0)?
            .with_n0(self.n0)?
            .with_orphan_reward(self.x)?)
    }

    fn strategy(&self) -> CliResult<Strategy> {
        load_strategy(&self.strategy)
    }

    fn file_u64(&self, key: &str) -> CliResult<Option<u64>> {
        match self.file.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("invalid {key} in config: {v}"))),
            None => Ok(None),
        }
    }

    /// Runs `body` inside a rayon pool of the configured size (or the global
    /// pool when unset). Results do not depend on the worker count.
    fn with_pool<R: Send>(&self, body: impl FnOnce() -> R + Send) -> CliResult<R> {
        match self.workers {
            None => Ok(body()),
            Some(workers) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                Ok(pool.install(body))
            }
        }
    }
}

pub fn load_strategy(name: &str) -> CliResult<Strategy> {
    match name {
        "honest" => Ok(Strategy::honest()),
        "one-plus-two" | "1+2" => Ok(Strategy::one_plus_two()),
        path => {
            if !Path::new(path).exists() {
                return Err(CliError::Config(format!(
                    "unknown strategy {path:?} (expected honest, one-plus-two, or a word-rule file)"
                )));
            }
            Ok(Strategy::from_rules_file(path)?)
        }
    }
}

fn parse_config_file(path: &Path) -> CliResult<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                idx + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "grid must be start:end:step, got {spec:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("invalid grid {spec:?}")))?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || start <= 0.0 || end >= 1.0 || start > end {
        return Err(CliError::Config(format!(
            "grid values must be strictly increasing within (0,1), got {spec:?}"
        )));
    }
    let count = ((end - start) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// >= 12 significant digits for every numeric field of a report.
fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalyticRow {
    strategy: String,
    q: f64,
    gamma_exact: f64,
    gamma_formula: Option<f64>,
    e_g: f64,
    e_h: f64,
    e_d: f64,
    e_reward: f64,
    margin_modified: f64,
}

pub const SWEEP_CSV_HEADER: &str = "q,gamma_exact,gamma_formula,e_g,e_h,e_d,margin_modified";

fn cmd_analytic(args: AnalyticArgs) -> CliResult<()> {
    let config = Config::from_common(&args.common)?;
    let strategy = config.strategy()?;
    let is_one_plus_two = strategy.outcome_equivalent(&Strategy::one_plus_two());
    let mut rows = Vec::new();
    for &q in &config.q_values {
        let params = config.params(q)?;
        let dist = enumerate(&strategy, &params)?;
        let report = expectations(&dist, &params, config.variant);
        let gamma_formula = if is_one_plus_two {
            Some(closed_form_gamma_one_plus_two(q)?)
        } else {
            None
        };
        rows.push(AnalyticRow {
            strategy: strategy.name().to_string(),
            q,
            gamma_exact: report.gamma,
            gamma_formula,
            e_g: report.e_g,
            e_h: report.e_h,
            e_d: report.e_d,
            e_reward: report.e_reward,
            margin_modified: report.e_reward - q * report.e_d,
        });
    }
    let mut body = String::new();
    if config.json {
        for row in &rows {
            writeln!(body, "{}", serde_json::to_string(row).unwrap()).unwrap();
        }
    } else {
        writeln!(body, "{SWEEP_CSV_HEADER}").unwrap();
        for row in &rows {
            writeln!(
                body,
                "{},{},{},{},{},{},{}",
                row.q,
                num(row.gamma_exact),
                row.gamma_formula.map(num).unwrap_or_default(),
                num(row.e_g),
                num(row.e_h),
                num(row.e_d),
                num(row.margin_modified),
            )
            .unwrap();
        }
    }
    emit(&config.out, &body)?;
    let worst = rows
        .iter()
        .map(|r| r.margin_modified)
        .fold(f64::NEG_INFINITY, f64::max);
    if worst > DOMINANCE_TOL {
        return Err(CliError::Violation(format!(
            "orphan-aware dominance violated: max margin {worst:e} > 0"
        )));
    }
    Ok(())
}

fn cmd_threshold(args: ThresholdArgs) -> CliResult<()> {
    let mut common = args.common.clone();
    // threshold scans its own q range
    if common.q.is_none() && common.q_grid.is_none() {
        common.q = Some(0.5);
    }
    let config = Config::from_common(&common)?;
    let strategy = config.strategy()?;
    let result = analytic::threshold(&strategy, config.variant, config.x)?;
    let variant = match config.variant {
        Variant::Standard => "standard",
        Variant::Orphan => "orphan",
    };
    let body = if config.json {
        #[derive(Serialize)]
        struct ThresholdRecord<'a> {
            strategy: &'a str,
            variant: &'a str,
            x: f64,
            #[serde(flatten)]
            result: Threshold,
        }
        format!(
            "{}\n",
            serde_json::to_string(&ThresholdRecord {
                strategy: strategy.name(),
                variant,
                x: config.x,
                result,
            })
            .unwrap()
        )
    } else {
        match result {
            Threshold::Root { q } => format!(
                "strategy={} variant={variant} x={} status=root threshold={}\n",
                strategy.name(),
                config.x,
                num(q)
            ),
            Threshold::NoneInRange => format!(
                "strategy={} variant={variant} x={} status=none\n",
                strategy.name(),
                config.x
            ),
            Threshold::IdenticallyZero => format!(
                "strategy={} variant={variant} x={} status=identically_zero\n",
                strategy.name(),
                config.x
            ),
        }
    };
    emit(&config.out, &body)
}

fn single_q(config: &Config) -> CliResult<f64> {
    match config.q_values.as_slice() {
        [q] => Ok(*q),
        _ => Err(CliError::Config("this command takes a single --q".into())),
    }
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let config = Config::from_common(&args.common)?;
    let strategy = config.strategy()?;
    let q = single_q(&config)?;
    let params = config.params(q)?;
    let cycles = match args.cycles {
        Some(c) => c,
        None => config.file_u64("cycles")?.unwrap_or(100_000),
    };
    if cycles < 1 {
        return Err(CliError::Config("cycles must be at least 1".into()));
    }

    if args.longrun {
        let epochs = match args.epochs {
            Some(e) => e,
            None => config.file_u64("epochs")?.unwrap_or(50) as u32,
        };
        let warmup = match args.warmup {
            Some(w) => w,
            None => config.file_u64("warmup")?.unwrap_or(10) as u32,
        };
        let replications = match args.replications {
            Some(r) => r,
            None => config.file_u64("replications")?.unwrap_or(48) as u32,
        };
        let daa = match args
            .common
            .variant
            .clone()
            .or_else(|| config.file.get("variant").cloned())
            .unwrap_or_else(|| "standard".to_string())
            .as_str()
        {
            "none" => DaaVariant::None,
            "standard" => DaaVariant::Standard,
            "orphan" | "modified" => DaaVariant::Orphan,
            other => return Err(CliError::Config(format!("unknown DAA variant {other:?}"))),
        };
        let (result, epoch_rows) = config.with_pool(|| {
            simulator::simulate_longrun(
                &strategy,
                &params,
                daa,
                epochs,
                warmup,
                replications,
                config.seed,
            )
        })??;
        if let Some(path) = &args.epoch_csv {
            let mut body = format!("{EPOCH_CSV_HEADER}\n");
            for row in &epoch_rows {
                writeln!(body, "{}", row.to_csv_row()).unwrap();
            }
            std::fs::write(path, body)?;
        }
        let body = if config.json {
            format!("{}\n", serde_json::to_string(&result).unwrap())
        } else {
            format!(
                "strategy={} q={} daa={daa:?} revenue_per_tau0={} stderr={} gamma_per_block={} \
                 time_per_official={} time_per_d_unit={} equilibrium_delta={} epochs={} warmup={} replications={}\n",
                strategy.name(),
                q,
                num(result.revenue_per_tau0),
                num(result.revenue_per_tau0_stderr),
                num(result.gamma_per_block),
                num(result.time_per_official),
                num(result.time_per_d_unit),
                num(result.equilibrium_delta),
                result.epochs_simulated,
                result.warmup_epochs,
                result.replications,
            )
        };
        return emit(&config.out, &body);
    }

    if args.martingale {
        let report = config
            .with_pool(|| simulator::martingale_check(&strategy, &params, cycles, config.seed))?;
        let body = if config.json {
            format!("{}\n", serde_json::to_string(&report).unwrap())
        } else {
            format!(
                "strategy={} q={} cycles={} diff_attacker={} stderr_attacker={} diff_honest={} stderr_honest={} pass={}\n",
                strategy.name(),
                q,
                report.n_cycles,
                num(report.diff_attacker),
                num(report.stderr_attacker),
                num(report.diff_honest),
                num(report.stderr_honest),
                report.pass,
            )
        };
        emit(&config.out, &body)?;
        if !report.pass {
            return Err(CliError::Violation(
                "stopping-time identity outside 3 standard errors".into(),
            ));
        }
        return Ok(());
    }

    if args.no_daa_check {
        let report = config
            .with_pool(|| simulator::no_daa_bound_check(&strategy, &params, cycles, config.seed))?;
        let body = if config.json {
            format!("{}\n", serde_json::to_string(&report).unwrap())
        } else {
            format!(
                "strategy={} q={} cycles={} rate={} stderr={} bound={} pass={}\n",
                strategy.name(),
                q,
                report.n_cycles,
                num(report.rate),
                num(report.stderr),
                num(report.bound),
                report.pass,
            )
        };
        emit(&config.out, &body)?;
        if !report.pass {
            return Err(CliError::Violation(
                "revenue rate exceeds q/tau0 beyond 3 standard errors".into(),
            ));
        }
        return Ok(());
    }

    // plain constant-difficulty Monte Carlo
    if let Some(path) = &args.csv {
        let mut body = format!("{CSV_HEADER}\n");
        simulator::stream_cycles(&strategy, &params, cycles, config.seed, |rec| {
            body.push_str(&rec.to_csv_row());
            body.push('\n');
        });
        std::fs::write(path, body)?;
    }
    let report = config.with_pool(|| {
        simulator::simulate_cycles(&strategy, &params, cycles, config.seed, config.variant)
    })?;
    let body = if config.json {
        format!("{}\n", serde_json::to_string(&report).unwrap())
    } else {
        format!(
            "strategy={} q={} cycles={cycles} gamma={} stderr={} e_g={} e_h={} e_d={} e_tau={} e_reward={}\n",
            strategy.name(),
            q,
            num(report.gamma),
            num(report.stderr.unwrap()),
            num(report.e_g),
            num(report.e_h),
            num(report.e_d),
            num(report.e_tau),
            num(report.e_reward),
        )
    };
    emit(&config.out, &body)
}

pub const MC_SWEEP_CSV_HEADER: &str = "q,gamma_exact,gamma_mc,stderr,abs_diff";

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let config = Config::from_common(&args.common)?;
    let strategy = config.strategy()?;
    let cycles = match args.cycles {
        Some(c) => c,
        None => config.file_u64("cycles")?.unwrap_or(100_000),
    };
    #[derive(Serialize)]
    struct SweepRow {
        q: f64,
        gamma_exact: f64,
        gamma_mc: f64,
        stderr: f64,
        abs_diff: f64,
    }
    let mut body = String::new();
    if !config.json {
        writeln!(body, "{MC_SWEEP_CSV_HEADER}").unwrap();
    }
    for &q in &config.q_values {
        let params = config.params(q)?;
        let dist = enumerate(&strategy, &params)?;
        let exact = expectations(&dist, &params, config.variant);
        let mc = config.with_pool(|| {
            simulator::simulate_cycles(&strategy, &params, cycles, config.seed, config.variant)
        })?;
        let row = SweepRow {
            q,
            gamma_exact: exact.gamma,
            gamma_mc: mc.gamma,
            stderr: mc.stderr.unwrap(),
            abs_diff: (mc.gamma - exact.gamma).abs(),
        };
        if config.json {
            writeln!(body, "{}", serde_json::to_string(&row).unwrap()).unwrap();
        } else {
            writeln!(
                body,
                "{},{},{},{},{}",
                row.q,
                num(row.gamma_exact),
                num(row.gamma_mc),
                num(row.stderr),
                num(row.abs_diff)
            )
            .unwrap();
        }
    }
    emit(&config.out, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let grid = parse_grid("0.05:0.45:0.05").unwrap();
        assert_eq!(grid.len(), 9);
        assert!((grid[0] - 0.05).abs() < 1e-12);
        assert!((grid[8] - 0.45).abs() < 1e-12);
        assert!(parse_grid("0.5:0.1:0.1").is_err());
        assert!(parse_grid("0:0.5:0.1").is_err());
        assert!(parse_grid("0.1:0.5").is_err());
    }

    #[test]
    fn builtin_strategies_load() {
        assert_eq!(load_strategy("honest").unwrap().name(), "honest");
        assert_eq!(
            load_strategy("one-plus-two").unwrap().name(),
            "one-plus-two"
        );
        assert!(load_strategy("no-such-strategy").is_err());
    }

    #[test]
    fn numeric_format_has_enough_digits() {
        let s = num(0.5384615384615384);
        // mantissa carries 13 significant digits
        assert!(s.starts_with("5.384615384615"));
    }
}
