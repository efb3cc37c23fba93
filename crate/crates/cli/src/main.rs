use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mzf_cli::{cmd_ber, cmd_cond_study, cmd_flops, cmd_sweep_kappa, CliError, GlobalOpts};

/// Zero forcing, modified zero forcing, hybrid and sphere decoding over
/// ill-conditioned MIMO channels.
#[derive(Debug, Parser)]
#[command(name = "mzf", version)]
struct Cli {
    /// Override the master seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress progress output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// BER against SNR; writes ber.csv and manifest.json.
    Ber {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Condition numbers of the R factors; writes cond_study.csv.
    CondStudy {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// BER against the imposed condition number; writes ber_vs_kappa.csv.
    SweepKappa {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the closed-form ZF and MZF flop counts.
    Flops {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = GlobalOpts {
        seed: cli.seed,
        threads: cli.threads,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Ber { config, out } => cmd_ber(&config, &out, &opts).map(drop),
        Command::CondStudy { config, out } => cmd_cond_study(&config, &out, &opts).map(drop),
        Command::SweepKappa { config, out } => cmd_sweep_kappa(&config, &out, &opts).map(drop),
        Command::Flops { n, m } => cmd_flops(n, m).map(|s| print!("{s}")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mzf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
