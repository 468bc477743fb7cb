//! `twistor-lab`: run transforms, pairings, recipe queries and verification
//! suites from the command line.
//!
//! Exit codes: 0 success, 1 failed checks or I/O, 2 usage or unknown bundle,
//! 3 pole on the contour, 4 invalid input, 5 grid mismatch, 6 pairing not
//! well defined within the threshold.

mod commands;
mod config;
mod error;
mod grid;
mod oracle;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use twistor_core::recipes::SpaceId;

use crate::commands::{parse_complex, parse_space, PairArgs, PairOperator, Precision, RecipeFormat, TransformArgs};
use crate::config::{FileConfig, Overrides, RunConfig, OUT_ENV};
use crate::error::CliError;
use crate::report::Envelope;
use crate::suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "twistor-lab", version, about = "Numerical Penrose transforms, pairings and checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML file with defaults for seed, output directory and tolerances.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory; falls back to the config file, then $TWISTOR_LAB_OUT, then `.`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the tabulated isomorphisms for a bundle and its Serre dual.
    Recipe {
        /// minitwistor, minkowski or hyperbolic:N
        #[arg(long, value_parser = parse_space)]
        space: SpaceId,
        /// Homogeneity.
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        /// Twist parameter as `re` or `re,im`.
        #[arg(long, value_parser = parse_complex, allow_negative_numbers = true)]
        lambda: Option<Complex64>,
        /// Compactly supported cohomology.
        #[arg(long)]
        compact: bool,
        #[arg(long, value_enum, default_value_t = RecipeFormat::Json)]
        format: RecipeFormat,
    },
    /// Transform a cocycle file onto a grid and report the PDE residual.
    Transform {
        #[arg(long, value_name = "FILE")]
        cocycle: PathBuf,
        #[arg(long, value_name = "FILE")]
        grid: PathBuf,
        /// Field file to write [default: <out>/field.twf].
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// JSON report [default: the field path with extension .json].
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Also write a CSV dump of the field.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Precision::F64)]
        precision: Precision,
        /// Contour radius in the fibre coordinate.
        #[arg(long)]
        radius: Option<f64>,
        /// Initial quadrature nodes.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Pair a kernel field with a compactly supported field.
    Pair {
        #[arg(long, value_name = "FILE")]
        kernel: PathBuf,
        #[arg(long, value_name = "FILE")]
        compact: PathBuf,
        #[arg(long, value_enum)]
        operator: PairOperator,
        /// λ for the Helmholtz and hyperbolic operators, as `re` or `re,im`.
        #[arg(long, value_parser = parse_complex, allow_negative_numbers = true)]
        lambda: Option<Complex64>,
        /// Largest acceptable relative well-definedness residual.
        #[arg(long)]
        threshold: Option<f64>,
        /// JSON report [default: <out>/pairing.json].
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Run a verification suite and print one line per check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

fn resolve(global: &GlobalArgs, mut flags: Overrides) -> Result<RunConfig, CliError> {
    let file = match &global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    flags.seed = global.seed;
    flags.out_dir = global.out.clone();
    let env_out = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    RunConfig::resolve(&file, &flags, env_out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let zero = Complex64::new(0.0, 0.0);
    match cli.command {
        Command::Recipe { space, n, lambda, compact, format } => {
            let cfg = resolve(&cli.global, Overrides::default())?;
            commands::cmd_recipe(&cfg, space, n, lambda.unwrap_or(zero), compact, format)
        }
        Command::Transform { cocycle, grid, output, report, csv, precision, radius, nodes } => {
            let flags = Overrides { contour_radius: radius, contour_nodes: nodes, ..Overrides::default() };
            let cfg = resolve(&cli.global, flags)?;
            commands::cmd_transform(&cfg, &TransformArgs { cocycle, grid, output, report, csv, precision })
        }
        Command::Pair { kernel, compact, operator, lambda, threshold, report } => {
            let cfg = resolve(&cli.global, Overrides { threshold, ..Overrides::default() })?;
            let args = PairArgs { kernel, compact, operator, lambda: lambda.unwrap_or(zero), report };
            commands::cmd_pair(&cfg, &args)
        }
        Command::Verify { suite } => verify(&resolve(&cli.global, Overrides::default())?, suite),
    }
}

#[derive(serde::Serialize)]
struct VerifyBody<'a> {
    suite: Suite,
    passed: usize,
    failed: usize,
    checks: &'a [suites::Check],
}

fn verify(cfg: &RunConfig, suite: Suite) -> Result<(), CliError> {
    let checks = suites::run(suite, cfg);
    let fmt = |m: Option<f64>| m.map_or_else(|| "exact".to_string(), |v| format!("{v:.3e}"));
    let width = checks.iter().map(|c| c.check.chars().count()).max().unwrap_or(0);
    for c in &checks {
        let pad = width - c.check.chars().count();
        println!(
            "{}  {:<12} {}{} {:>10}  {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.check,
            " ".repeat(pad),
            fmt(c.measured),
            c.criterion
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} passed, {failed} failed (seed {})", checks.len() - failed, cfg.seed);
    let path = cfg.out_dir.join(format!("verify-{}.json", suite.name()));
    let body = VerifyBody { suite, passed: checks.len() - failed, failed, checks: &checks };
    let json = Envelope::new("verify", cfg, body).to_json();
    report::ensure_parent(&path)?;
    std::fs::write(&path, format!("{json}\n")).map_err(|e| CliError::io(&path, e))?;
    eprintln!("report written to {}", path.display());
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twistor-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
