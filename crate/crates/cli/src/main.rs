//! `netdeg`: equilibrium-count bounds for network games on the command line.

mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netdeg_core::Error;

use commands::{ExportKind, Format};
use input::InputArgs;

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "netdeg", version, about = "Exact and numerical counts of totally mixed equilibria in network games")]
struct Cli {
    /// Master seed for payoff sampling and the homotopy.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file (a directory for `sweep`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact degree with every applicable route cross-checked.
    Degree {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Permanent of the polynomial-graph matrix or of a matrix file.
    Perm {
        #[command(flatten)]
        input: InputArgs,
        /// Matrix file: dimension on the first line, then rows.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Also run the expansion over all permutations (small matrices only).
        #[arg(long)]
        naive: bool,
    },
    /// Count (and optionally list) cycle covers.
    Covers {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// List covers, failing if there are more than this many.
        #[arg(long)]
        list: Option<usize>,
    },
    /// Mixed cells of the Newton polytopes, one record per cell.
    Cells {
        #[command(flatten)]
        input: InputArgs,
        /// Allow strategy dimensions above 1.
        #[arg(long)]
        experimental: bool,
    },
    /// Transfer matrix of a gadget graph (default K2).
    Transfer {
        #[arg(long)]
        gadget: Option<PathBuf>,
        /// Also report trace(T^n).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Strongly connected components of the player graph, players 1-based.
    Scc {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write the solver input file, the polynomial-graph matrix or the game.
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = ExportKind::SolverInput)]
        what: ExportKind,
        /// Shorthand for `--what matrix`.
        #[arg(long, conflicts_with = "what")]
        matrix: bool,
    },
    /// Solve one sampled game by homotopy continuation.
    Solve {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Solve many sampled games and compare with the exact degree.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invalid(_) | Error::Parse(_) | Error::Structural(_) | Error::Experimental(_) => 2,
        Error::CapExceeded { .. } => 3,
        Error::NonGeneric(_) => 4,
        Error::Numeric(_) | Error::Internal(_) | Error::Io(_) => 1,
    }
}

fn run(cli: &Cli) -> netdeg_core::Result<()> {
    let (seed, format) = (cli.seed, cli.format);
    let text = match &cli.command {
        Command::Degree { input } => commands::degree(input, seed, format)?,
        Command::Perm { input, matrix, naive } => commands::perm(input, matrix.as_deref(), *naive, format)?,
        Command::Covers { input, matrix, list } => commands::covers(input, matrix.as_deref(), *list, format)?,
        Command::Cells { input, experimental } => commands::cells(input, seed, *experimental, format)?,
        Command::Transfer { gadget, n } => commands::transfer(gadget.as_deref(), *n, format)?,
        Command::Scc { input } => commands::scc(input, format)?,
        Command::Export { input, what, matrix } => {
            let kind = if *matrix { ExportKind::Matrix } else { *what };
            commands::export(input, seed, kind)?
        }
        Command::Solve { input } => commands::solve(input, seed, format)?,
        Command::Sweep { input, trials } => {
            print!("{}", commands::sweep(input, seed, *trials, cli.out.as_ref(), format)?);
            return Ok(());
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netdeg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
