use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vvlc::{run, Mode, RunRequest};

/// Street-corner vehicular VLC channel simulator.
#[derive(Parser)]
#[command(name = "vvlc", version)]
struct Cli {
    #[command(subcommand)]
    mode: Command,
}

#[derive(Subcommand)]
enum Command {
    /// MIMO tap lists and channel stats at t = 0.
    Snapshot(Common),
    /// Received power, minimum delay and taps over the time grid.
    Timeline(Common),
    /// Per-realization channel stats and their distribution.
    MonteCarlo {
        #[command(flatten)]
        common: Common,
        /// Number of scatterer realizations.
        #[arg(long, default_value_t = vvlc::run::DEFAULT_REALIZATIONS)]
        realizations: usize,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario config file (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Config override `key=value`, applied after the file. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn request(mode: Mode, common: Common) -> RunRequest {
    RunRequest {
        config_path: common.config,
        seed: common.seed,
        overrides: common.overrides,
        ..RunRequest::new(mode, common.out)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the config exit code; 2 means geometry here.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let req = match cli.mode {
        Command::Snapshot(c) => request(Mode::Snapshot, c),
        Command::Timeline(c) => request(Mode::Timeline, c),
        Command::MonteCarlo { common, realizations, threads } => RunRequest {
            realizations: Some(realizations),
            threads,
            ..request(Mode::MonteCarlo, common)
        },
    };
    match run(&req) {
        Ok(outcome) => {
            for path in outcome.files {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("vvlc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
