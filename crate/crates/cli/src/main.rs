//! `qtherm`: runs thermal-machine scenarios described in TOML files and
//! writes the results as CSV or JSON lines.

mod compare;
mod config;
mod error;
mod output;
mod runner;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Scenario;
use error::CliError;
use output::Format;

#[derive(Parser)]
#[command(name = "qtherm", version, about = "Quantum thermal machine scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Scenario file
    config: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario with its configured scheme
    Run(OutputArgs),
    /// Evaluate a scenario with the secular, local and PERLind schemes
    CompareGenerators(OutputArgs),
    /// Check a scenario file without solving anything
    Validate {
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let src = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Scenario::parse(&src).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let scenario = load(&args.config)?;
            let rows = runner::run_points(&scenario, scenario.config.scheme)?;
            let table = output::table(&scenario, &rows);
            emit(&output::render(&scenario, &table, args.format, "run"), args.out.as_deref())
        }
        Command::CompareGenerators(args) => {
            let scenario = load(&args.config)?;
            let table = compare::compare_generators(&scenario)?;
            let text = output::render(&scenario, &table, args.format, "compare-generators");
            emit(&text, args.out.as_deref())
        }
        Command::Validate { config } => {
            let scenario = load(&config)?;
            let c = &scenario.config;
            println!(
                "ok: {:?} with the {} scheme, {} point(s), columns {}",
                c.model,
                c.scheme,
                scenario.points().len(),
                c.outputs.join(",")
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtherm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
