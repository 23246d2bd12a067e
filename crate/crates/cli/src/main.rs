mod commands;
mod error;
mod range;
mod svg;
mod verify;

use clap::{Parser, Subcommand};
use commands::{AnalyzeArgs, GenerateArgs, Outputs, SpectrumArgs};
use error::{CliError, Result};
use std::io::Write;
use std::process::ExitCode;
use verify::VerifyArgs;

/// Dyadic multifractal toolkit.
#[derive(Debug, Parser)]
#[command(name = "mfzoo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a construction and write it to disk.
    Generate(GenerateArgs),
    /// Pointwise exponent estimates on a coefficient field.
    Analyze(AnalyzeArgs),
    /// Run a verifier suite.
    Verify(VerifyArgs),
    /// Coarse spectrum of a coefficient field as CSV plus an SVG plot.
    Spectrum(SpectrumArgs),
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("MFZOO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("MFZOO_THREADS=`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(v)?) {
        // A closed reader (`| head`) is not an error.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        res => Ok(res?),
    }
}

fn run(cli: Cli, out: &mut Outputs) -> Result<()> {
    init_threads()?;
    match cli.command {
        Command::Generate(args) => {
            let summary = commands::generate(&args, out)?;
            print_json(&serde_json::json!({ "written": out.paths(), "summary": summary }))
        }
        Command::Analyze(args) => {
            let report = commands::analyze(&args, out)?;
            if args.out.is_none() {
                print_json(&report)?;
            }
            Ok(())
        }
        Command::Spectrum(args) => {
            let summary = commands::spectrum(&args, out)?;
            print_json(&summary)
        }
        Command::Verify(args) => {
            let (report, pass) = verify::verify(&args)?;
            match &args.out {
                Some(path) => {
                    mfzoo::io::write_text(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
                }
                None => print_json(&report)?,
            }
            if pass {
                Ok(())
            } else {
                Err(CliError::Verification("verifier suite failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("");
            let err = CliError::Config(first.trim_start_matches("error: ").to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let mut out = Outputs::default();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if !matches!(err, CliError::Verification(_)) {
                out.rollback();
            }
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
