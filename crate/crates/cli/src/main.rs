//! `mpq` — max-plus models of queueing networks.
//!
//! Exit codes: 0 success / full agreement, 1 verification mismatch,
//! 2 input error, 3 unsupported topology/representation combination.

mod commands;
mod config;
mod error;
mod metrics;
mod tracefile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "mpq",
    version,
    about = "Evaluate G/G/1 queues, tandem lines and closed loops as max-plus linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one representation and write the departure trace as CSV
    Simulate {
        /// Scenario config (TOML)
        config: PathBuf,
        /// Trace output path, overriding the config's output.trace
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also dump the event-level simulation log (time,server,customer,event)
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Run every applicable representation plus the event simulator and
    /// compare them entrywise
    Verify {
        /// Scenario config (TOML)
        config: PathBuf,
    },
    /// Compute sojourn/interdeparture/throughput/busy-fraction metrics
    /// from a trace CSV, as JSON on stdout
    Metrics {
        /// Trace CSV produced by `simulate`
        trace: PathBuf,
    },
    /// Print the transition matrices of one customer index
    ShowMatrix {
        /// Scenario config (TOML)
        config: PathBuf,
        /// Customer index (1-based)
        #[arg(long, default_value_t = 1)]
        customer: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate {
            config,
            output,
            events,
        } => commands::cmd_simulate(config, output.as_deref(), events.as_deref()),
        Command::Verify { config } => commands::cmd_verify(config),
        Command::Metrics { trace } => commands::cmd_metrics(trace),
        Command::ShowMatrix { config, customer } => commands::cmd_show_matrix(config, *customer),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
