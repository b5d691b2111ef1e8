use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weakf_core::catalog::EXAMPLE_NAMES;
use weakf_core::suite::{DEFAULT_SAMPLES, DEFAULT_SEED};
use weakf_core::{run_suite, ExampleSpec, ReportFormat, Suite, SuiteConfig, SuiteError, Tolerances};

/// Environment variable overriding the default seed.
const SEED_ENV: &str = "WEAKF_SEED";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "weakf", version, about = "Verify weak metric f-structures on catalog examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites on a catalog example and print a residual report.
    Verify(VerifyArgs),
    /// List catalog examples.
    Examples,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Catalog example name.
    #[arg(long)]
    example: String,
    /// Example parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Comma-separated suites (axioms, classes, frames, theorems, submanifold) or `all`.
    #[arg(long, default_value = "all")]
    suites: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Sampling seed [default: 42, or $WEAKF_SEED].
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    tol_exact: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_curv: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn config_from(args: &VerifyArgs) -> Result<SuiteConfig, String> {
    let mut spec = ExampleSpec::new(&args.example);
    for kv in &args.params {
        spec.push_assignment(kv).map_err(|e| e.to_string())?;
    }
    let suites = Suite::parse_list(&args.suites).map_err(|e| e.to_string())?;
    let seed = match args.seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("{SEED_ENV}=`{v}` is not an unsigned 64-bit integer"))?,
            Err(_) => DEFAULT_SEED,
        },
    };
    for (name, t) in [("--tol-exact", args.tol_exact), ("--tol-curv", args.tol_curv)] {
        if !(t.is_finite() && t >= 0.0) {
            return Err(format!("{name} must be a finite non-negative number"));
        }
    }
    Ok(SuiteConfig {
        example: spec,
        suites,
        samples: args.samples,
        seed,
        tol: Tolerances {
            exact: args.tol_exact,
            curvature: args.tol_curv,
        },
        format: match args.format {
            Format::Json => ReportFormat::Json,
            Format::Text => ReportFormat::Text,
        },
    })
}

fn verify(args: &VerifyArgs) -> ExitCode {
    let config = match config_from(args) {
        Ok(c) => c,
        Err(msg) => return usage(msg),
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(SuiteError::Usage(e)) => return usage(e),
        Err(e @ SuiteError::Internal { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let rendered = report.render();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INTERNAL);
            }
            eprintln!(
                "{}: {} -> {}",
                report.example,
                if report.overall { "pass" } else { "fail" },
                path.display()
            );
        }
        None => print!("{rendered}"),
    }
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Examples => {
            for name in EXAMPLE_NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
    }
}
