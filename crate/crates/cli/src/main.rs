//! `telefid`: fidelity laws, Monte Carlo runs, certification sweeps and figure data.

mod commands;
mod config;
mod error;
mod figures;
mod model;
mod output;
mod validate;

use clap::{Parser, Subcommand};
use telefid::states::Bell;

use config::Params;
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "telefid",
    version,
    about = "Statistics of single-qubit teleportation fidelity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    params: Params,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Density of the fidelity on a grid, plus atoms.
    Pdf,
    /// Monte Carlo draws of the fidelity with a summary.
    Sample,
    /// Certification of one protocol under each prior.
    Certify,
    /// Certification of uniform Bell-diagonal resources.
    SweepTetra,
    /// Certification over a (pA, pB) amplitude-damping grid.
    SweepAdc,
    /// Data and manifest for figure 1..7.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        id: u8,
        /// Bell vertex (1..4) magnified in figure 6.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
        vertex: u8,
    },
    /// Run the invariant battery.
    Validate,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let p = cli.params.merged()?;
    if let Some(n) = p.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    match cli.command {
        Command::Pdf => commands::pdf(&p),
        Command::Sample => commands::sample(&p),
        Command::Certify => commands::certify_cmd(&p),
        Command::SweepTetra => commands::sweep_tetra(&p),
        Command::SweepAdc => commands::sweep_adc(&p),
        Command::Figure { id, vertex } => {
            figures::figure(&p, id, Bell::from_index(vertex as usize)?)
        }
        Command::Validate => commands::validate_cmd(&p),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("telefid: {e}");
        std::process::exit(e.exit_code());
    }
}
