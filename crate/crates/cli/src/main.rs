use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracmal::model::Compartment;
use fracmal_cli::{
    cmd_analyze, cmd_phase, cmd_simulate, load_config, CliError, Scenario, ScenarioConfig,
};

/// Fractional-order malaria model: simulations, phase portraits, stability reports.
#[derive(Parser)]
#[command(name = "fracmal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario JSON; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Trajectory CSV per fractional order.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Keep every n-th row.
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Two-compartment phase CSV per fractional order.
    Phase {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Compartment,
        #[arg(long)]
        y: Compartment,
        #[arg(long)]
        stride: Option<usize>,
    },
    /// JSON stability report per fractional order.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
}

fn scenario(c: &Common) -> Result<Scenario, CliError> {
    match &c.config {
        Some(p) => load_config(p),
        None => ScenarioConfig::default().validate(),
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Simulate { common, stride } => {
            cmd_simulate(&scenario(&common)?, &common.out, stride)
        }
        Command::Phase {
            common,
            x,
            y,
            stride,
        } => cmd_phase(&scenario(&common)?, &common.out, x, y, stride),
        Command::Analyze { common } => cmd_analyze(&scenario(&common)?, &common.out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the config-error code
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
