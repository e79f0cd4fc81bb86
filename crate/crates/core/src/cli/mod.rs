//! Batch front end: read a problem file, run one command, print a report.
//!
//! Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 the Monte
//! Carlo estimate and the factorization disagree beyond three standard
//! errors.

mod config;
mod report;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, ConfigError, ProblemConfig, DEFAULT_PATHS, DEFAULT_SEED};
pub use report::{Record, Verdict};

use crate::error::Error;
use crate::laplace::InversionMethod;
use crate::mc::estimate_functional;
use crate::wh::{block_factorize, evaluate};

/// The fluid tank scenario shipped with the crate.
pub const FLUID_CONFIG: &str = include_str!("../../data/fluid.cfg");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

/// Agreement gate for `compare`, in standard errors.
pub const AGREEMENT_SE: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(name = "fluctuation", version, about = "Passage functionals of Markov-modulated fluids with time-varying generators")]
struct Cli {
    /// Print one JSON record instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock times (makes JSON output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a problem file without computing anything.
    Check { config: String },
    /// Block factorization diagnostics at the given (or default) rates.
    Factorize {
        config: String,
        /// Randomization rates, comma separated; defaults to 1 / regime length.
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
    },
    /// Evaluate the configured passage functional.
    Passage {
        config: String,
        #[command(flatten)]
        inv: InvArgs,
    },
    /// Monte Carlo estimate of the configured functional.
    Mc {
        config: String,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Factorization and Monte Carlo side by side, with a verdict.
    Compare {
        config: String,
        #[command(flatten)]
        inv: InvArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Run the bundled fluid tank scenario end to end.
    ExampleFluid {
        #[command(flatten)]
        inv: InvArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Args)]
struct InvArgs {
    /// Override the inversion method (gaver, gaver-stehfest, talbot).
    #[arg(long)]
    method: Option<String>,
    /// Override the number of terms per dimension.
    #[arg(long)]
    terms: Option<usize>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn load(path: &str) -> Result<(String, ProblemConfig), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{path}: {e}")))?;
    let cfg = parse_config(&text)?;
    Ok((text, cfg))
}

fn apply_inv(cfg: &mut ProblemConfig, inv: &InvArgs) -> Result<(), Failure> {
    if let Some(m) = &inv.method {
        let method: InversionMethod = m.parse().map_err(|e: Error| Failure::Config(e.to_string()))?;
        let mut fresh = crate::laplace::InversionConfig::for_numerical_evaluator(method, cfg.schedule.n_breakpoints());
        fresh.precision = cfg.inversion.precision;
        cfg.inversion = fresh;
    }
    if let Some(t) = inv.terms {
        cfg.inversion.terms = t;
    }
    cfg.inversion.validate().map_err(|e| Failure::Config(e.to_string()))
}

fn apply_sim(cfg: &mut ProblemConfig, sim: &SimArgs) -> Result<(), Failure> {
    if let Some(p) = sim.paths {
        cfg.mc.paths = p;
    }
    if let Some(s) = sim.seed {
        cfg.mc.seed = s;
    }
    cfg.mc.validate().map_err(|e| Failure::Config(e.to_string()))
}

struct Ctx<'a> {
    json: bool,
    timings: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn ms(&self, start: Instant) -> Option<f64> {
        self.timings.then(|| start.elapsed().as_secs_f64() * 1e3)
    }
}

fn passage_record(ctx: &mut Ctx<'_>, command: &str, cfg: &ProblemConfig) -> Result<Record, Failure> {
    let spec = cfg.require_functional()?;
    let start = Instant::now();
    let v = evaluate(&cfg.schedule, &cfg.drift, cfg.discount, &spec, &cfg.inversion)?;
    let mut rec = Record::new(command, &cfg.digest);
    rec.value = Some(v.value);
    rec.residual = Some(v.diagnostics.residual);
    rec.method = Some(v.diagnostics.method.to_string());
    rec.terms = Some(v.diagnostics.terms);
    rec.wall_ms = ctx.ms(start);
    rec.elapsed_ms.0 = start.elapsed().as_secs_f64() * 1e3;
    rec.functional = Some(report::describe(&spec, cfg.states()));
    if v.diagnostics.out_of_range {
        rec.verdict = Some(Verdict::OutOfRange);
    }
    rec.out_of_range = v.diagnostics.out_of_range;
    rec.inverted = v.diagnostics.inverted;
    Ok(rec)
}

fn mc_record(ctx: &mut Ctx<'_>, command: &str, cfg: &ProblemConfig) -> Result<Record, Failure> {
    let spec = cfg.require_functional()?;
    let start = Instant::now();
    let est = estimate_functional(&cfg.schedule, &cfg.drift, cfg.discount, &spec, &cfg.mc)?;
    let mut rec = Record::new(command, &cfg.digest);
    rec.value = Some(est.mean);
    rec.std_error = Some(est.std_error);
    rec.method = Some("monte-carlo".into());
    rec.seed = Some(est.seed);
    rec.paths = Some(est.paths);
    rec.censored = Some(est.censored);
    rec.bias_bound = Some(est.truncation_bias_bound);
    rec.wall_ms = ctx.ms(start);
    rec.elapsed_ms.0 = start.elapsed().as_secs_f64() * 1e3;
    rec.functional = Some(report::describe(&spec, cfg.states()));
    Ok(rec)
}

fn compare(ctx: &mut Ctx<'_>, command: &str, cfg: &ProblemConfig) -> Result<i32, Failure> {
    let wh = passage_record(ctx, command, cfg)?;
    let mc = mc_record(ctx, command, cfg)?;
    let rec = Record::combine(wh, mc, AGREEMENT_SE);
    let code = if rec.verdict == Some(Verdict::Disagree) { EXIT_DISAGREE } else { EXIT_OK };
    emit(ctx, &rec, |o| report::compare_table(o, &rec, cfg.discount))?;
    Ok(code)
}

fn emit(
    ctx: &mut Ctx<'_>,
    rec: &Record,
    table: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), Failure> {
    let res = if ctx.json { rec.write_json(ctx.out) } else { table(ctx.out) };
    res.map_err(|e| Failure::Config(format!("cannot write report: {e}")))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut ctx = Ctx { json: cli.json, timings: cli.timings, out };
    match cli.command {
        Command::Check { config } => {
            let (_, cfg) = load(&config)?;
            let rec = Record::new("check", &cfg.digest);
            emit(&mut ctx, &rec, |o| report::check_table(o, &cfg))?;
            Ok(EXIT_OK)
        }
        Command::Factorize { config, rates } => {
            let (_, cfg) = load(&config)?;
            let q = match rates {
                Some(q) => q,
                None => cfg.schedule.increments().iter().map(|d| 1.0 / d).collect(),
            };
            let start = Instant::now();
            let bf = block_factorize(&cfg.schedule, &cfg.drift, cfg.discount, &q)?;
            let residual = bf.augmented_residual(&cfg.schedule, &cfg.drift)?;
            let mut rec = Record::new("factorize", &cfg.digest);
            rec.residual = Some(residual);
            rec.method = Some("block".into());
            rec.wall_ms = ctx.ms(start);
            emit(&mut ctx, &rec, |o| report::factorize_table(o, &cfg, &bf, residual))?;
            Ok(EXIT_OK)
        }
        Command::Passage { config, inv } => {
            let (_, mut cfg) = load(&config)?;
            apply_inv(&mut cfg, &inv)?;
            let rec = passage_record(&mut ctx, "passage", &cfg)?;
            emit(&mut ctx, &rec, |o| report::passage_table(o, &rec, cfg.discount))?;
            Ok(EXIT_OK)
        }
        Command::Mc { config, sim } => {
            let (_, mut cfg) = load(&config)?;
            apply_sim(&mut cfg, &sim)?;
            let rec = mc_record(&mut ctx, "mc", &cfg)?;
            emit(&mut ctx, &rec, |o| report::mc_table(o, &rec, cfg.discount))?;
            Ok(EXIT_OK)
        }
        Command::Compare { config, inv, sim } => {
            let (_, mut cfg) = load(&config)?;
            apply_inv(&mut cfg, &inv)?;
            apply_sim(&mut cfg, &sim)?;
            compare(&mut ctx, "compare", &cfg)
        }
        Command::ExampleFluid { inv, sim } => {
            let mut cfg = parse_config(FLUID_CONFIG)?;
            apply_inv(&mut cfg, &inv)?;
            apply_sim(&mut cfg, &sim)?;
            compare(&mut ctx, "example-fluid", &cfg)
        }
    }
}

/// Run with explicit arguments (the first is the program name) and
/// streams; returns the exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(err, "numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
