use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lagrangian::ImmersionRegistry;
use report_cli::*;

#[derive(Parser)]
#[command(name = "nklab", version, about = "Checks for Lagrangian submanifolds of the nearly Kähler SL(2,R)xSL(2,R)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// structure, examples, berger, normal_forms or all
        target: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Replace every residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an operator pair given as JSON.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Angle functions of a builtin, wrapped or file-described immersion.
    Angles {
        #[arg(long)]
        immersion: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Codazzi obstruction over a parameter grid.
    CodazziScan {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        case: u8,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        grid: u64,
    },
}

fn seed(flag: u64) -> Result<u64, CliError> {
    effective_seed(flag, std::env::var(SEED_ENV).ok().as_deref())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { target, samples, tol, seed: s, format, out } => {
            if let Some(t) = tol {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(CliError::Usage(format!("--tol must be a non-negative number, got {t}")));
                }
            }
            let cfg = SuiteConfig::new(samples as usize, seed(s)?, tol);
            let report = cmd_verify(&SuiteRegistry::with_builtins(), &target, &cfg)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(&text, out.as_ref())?;
            if !report.pass {
                for c in report.failures() {
                    eprintln!("FAIL {} residual={:?} tol={:e}", c.name, c.residual, c.tolerance);
                }
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Classify { input } => {
            emit(&to_canonical_json(&cmd_classify(&input)?), None)?;
            Ok(0)
        }
        Command::Angles { immersion, samples, seed: s } => {
            let report = cmd_angles(&ImmersionRegistry::with_builtins(), &immersion, samples as usize, seed(s)?)?;
            emit(&to_canonical_json(&report), None)?;
            Ok(0)
        }
        Command::CodazziScan { case, grid } => {
            let report = cmd_codazzi_scan(case, grid as usize)?;
            for s in &report.skipped {
                eprintln!("skipped inadmissible point {s}");
            }
            emit(&to_canonical_json(&report), None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nklab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
