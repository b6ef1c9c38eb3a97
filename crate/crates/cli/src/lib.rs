//! Command-line front end for NOPO network XY sampling experiments.
//!
//! Subcommands:
//!
//! - `run`: Langevin ensembles over a β sweep, writing per-point sample CSVs
//!   and a summary JSON;
//! - `validate <suite>`: property suites (`opo`, `reduction`, `boltzmann`,
//!   `analytics`, `estimation`) with a JSON pass/fail report;
//! - `analytics`: exact versus large-N ring statistics as CSV;
//! - `mcmc`: Metropolis chains on the ring;
//! - `validate-opo`: the single-oscillator checks at chosen pump ratios.
//!
//! Exit codes: 0 success, 1 specification or validation failure, 2
//! numerical failure, 3 I/O error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics_table;
pub mod config;
pub mod error;
pub mod mcmc_cmd;
pub mod output;
pub mod run;
pub mod units;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nopo_xy::mcmc::{ChainStart, SweepOrder};

pub use error::{CliError, CliResult};

use config::{key_help, load_file, parse_override, preset, ExperimentSpec, Flat};
use output::{json_string, write_file};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "NOPO_XY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "nopo-xy", version, about = "Simulate NOPO networks as Boltzmann samplers of the XY model")]
pub struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Langevin experiment described by presets, a config file and overrides.
    #[command(after_help = key_help())]
    Run(RunArgs),
    /// Run a named property suite and print a JSON report.
    Validate(ValidateArgs),
    /// Tabulate exact and large-N ring statistics as CSV.
    Analytics(AnalyticsArgs),
    /// Sample ring(N, 1) with single-site Metropolis chains.
    Mcmc(McmcArgs),
    /// Check the single-oscillator fixed point and adiabatic elimination.
    ValidateOpo(ValidateOpoArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config file with flat dotted keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in starting point: fig5, appendix-c or uncoupled.
    #[arg(long)]
    pub preset: Option<String>,
    /// Override a config key; repeatable; wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Master seed (overrides run.master_seed).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Full protocol: N = 5000 and 1000 trajectories per point. Slow.
    #[arg(long)]
    pub paper_scale: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Suite: opo, reduction, boltzmann, analytics or estimation.
    pub suite: String,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyticsArgs {
    /// Comma-separated inverse temperatures.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2.8,5.7,15,31")]
    pub betas: Vec<f64>,
    /// Comma-separated ring sizes.
    #[arg(long, value_delimiter = ',', default_value = "3,4,8,16,256,5000")]
    pub sizes: Vec<usize>,
    /// Highest Bessel order kept in the transfer-matrix sums.
    #[arg(long, default_value_t = nopo_xy::analytics::DEFAULT_N_MAX)]
    pub n_max: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Sequential,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StartArg {
    Aligned,
    UniformRandom,
}

#[derive(Debug, Args)]
pub struct McmcArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 256)]
    pub n_spins: usize,
    /// Retained configurations per chain.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Sweeps between retained configurations.
    #[arg(long, default_value_t = 10)]
    pub thin: usize,
    /// Burn-in sweeps (default 10·N for β ≤ 10, 100·N above).
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Half-width of the uniform proposal window, radians.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Tune the width toward 40% acceptance during burn-in.
    #[arg(long)]
    pub adapt: bool,
    #[arg(long, value_enum, default_value = "sequential")]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value = "aligned")]
    pub start: StartArg,
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "out-mcmc")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateOpoArgs {
    /// Comma-separated pump ratios for the fixed-point check.
    #[arg(long, value_delimiter = ',', default_value = "1.1,1.5,2,5")]
    pub ratios: Vec<f64>,
    /// γ_s/γ_p = γ_s/γ_i used for the adiabatic-elimination check.
    #[arg(long, default_value_t = 1e-3)]
    pub gamma_ratio: f64,
}

/// Merges preset, file and overrides, in increasing precedence.
pub fn resolve_spec(args: &RunArgs) -> CliResult<ExperimentSpec> {
    let mut flat = Flat::new();
    if let Some(name) = &args.preset {
        flat.extend(preset(name)?);
    }
    if let Some(path) = &args.config {
        flat.extend(load_file(path)?);
    }
    for s in &args.set {
        let (k, v) = parse_override(s)?;
        flat.insert(k, v);
    }
    if let Some(seed) = args.seed {
        flat.insert("run.master_seed".into(), toml::Value::Integer(seed as i64));
    }
    if let Some(out) = &args.out {
        flat.insert("output.dir".into(), toml::Value::String(out.display().to_string()));
    }
    let spec = ExperimentSpec::from_flat(&flat)?;
    Ok(if args.paper_scale { spec.paper_scale() } else { spec })
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Run(args) => {
            let spec = resolve_spec(&args)?;
            if args.paper_scale {
                eprintln!(
                    "warning: --paper-scale runs N = {} with {} trajectories per point; expect hours of compute",
                    spec.n_spins, spec.n_trajectories
                );
            }
            let out = run::run_experiment(&spec)?;
            for p in &out.samples {
                println!("{}", p.display());
            }
            println!("{}", out.summary.display());
            Ok(())
        }
        Command::Validate(args) => {
            let report = validate::run_suite(&args.suite)?;
            finish_report(&report, args.out.as_deref())
        }
        Command::ValidateOpo(args) => {
            let report = validate::opo_suite(&args.ratios, args.gamma_ratio)?;
            finish_report(&report, None)
        }
        Command::Analytics(args) => {
            let csv = analytics_table::analytics_table(&args.betas, &args.sizes, args.n_max)?;
            match args.out {
                Some(p) => write_file(&p, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Mcmc(args) => {
            let job = mcmc_cmd::McmcJob {
                beta: args.beta,
                n_spins: args.n_spins,
                n_samples: args.samples,
                thin: args.thin,
                burn_in: args.burn_in,
                proposal_width: args.width,
                adapt: args.adapt,
                order: match args.order {
                    OrderArg::Sequential => SweepOrder::Sequential,
                    OrderArg::Random => SweepOrder::Random,
                },
                start: match args.start {
                    StartArg::Aligned => ChainStart::Aligned,
                    StartArg::UniformRandom => ChainStart::UniformRandom,
                },
                n_chains: args.chains,
                seed: args.seed,
                output_dir: args.out,
            };
            let summary = mcmc_cmd::run_mcmc(&job)?;
            print!("{}", json_string(&summary));
            Ok(())
        }
    }
}

fn finish_report(report: &validate::Report, out: Option<&std::path::Path>) -> CliResult<()> {
    let text = json_string(&validate::report_json(report));
    if let Some(p) = out {
        write_file(p, &text)?;
    }
    print!("{text}");
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::ValidationFailed(failed.join(", ")))
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::spec("threads", "must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(CliError::spec("threads", e.to_string())),
        },
        None => execute(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
