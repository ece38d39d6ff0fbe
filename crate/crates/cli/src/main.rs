use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand};
use equivariantize::{catalog, emit_report, fixture, run_scenario, Format, Overrides};

/// Runs scenarios on finite group actions and reports verdicts.
///
/// Exit codes: 0 all analyses pass, 1 a verdict failed, 2 parse error,
/// 3 validation error, 4 analysis or internal error.
#[derive(Parser)]
#[command(name = "equivariantize", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a built-in fixture by name; `-` reads stdin).
    Run {
        scenario: String,
        #[arg(long, value_enum, env = "EQUIVARIANTIZE_FORMAT", default_value = "text")]
        format: Format,
        #[arg(long, env = "EQUIVARIANTIZE_SEED")]
        seed: Option<u64>,
        #[arg(long, env = "EQUIVARIANTIZE_TOLERANCE")]
        tolerance: Option<f64>,
        /// Largest coboundary matrix (in entries) the cohomology solver may build.
        #[arg(long, env = "EQUIVARIANTIZE_BUDGET")]
        budget: Option<usize>,
        /// Write the report here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List built-in fixtures and analyses.
    Catalog,
}

fn read_scenario(arg: &str) -> anyhow::Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading standard input")?;
        return Ok(s);
    }
    match std::fs::read_to_string(arg) {
        Ok(s) => Ok(s),
        Err(e) => match fixture(arg) {
            Some(s) => Ok(s.to_string()),
            None => Err(e).with_context(|| format!("reading scenario `{arg}`")),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog => {
            print!("{}", catalog());
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            format,
            seed,
            tolerance,
            budget,
            output,
        } => {
            let text = match read_scenario(&scenario) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            };
            let report = match run_scenario(&text, &Overrides { seed, tolerance, budget }) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            let out = emit_report(&report, format);
            match output {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, out) {
                        eprintln!("error: writing {}: {e}", p.display());
                        return ExitCode::from(4);
                    }
                }
                None => print!("{out}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}
