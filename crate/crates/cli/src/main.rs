//! `perfmat`: exact perfect-matching counts, the degree bound, seeded
//! verification campaigns and lemma sweeps.
//!
//! Exit status is 0 on success, 1 on usage or input errors and 2 when a
//! mathematical check fails.

mod commands;
mod family;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{BoundArgs, CountArgs, GenArgs, LemmasArgs, VerifyArgs};

#[derive(Parser)]
#[command(name = "perfmat", version, about = "Perfect matchings, hafnians and their degree bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of perfect matchings.
    Count(CountArgs),
    /// Degree bound prod_v (deg v!)^(1/(2 deg v)).
    Bound(BoundArgs),
    /// Check count <= bound over a family of graphs.
    Verify(VerifyArgs),
    /// Numerical sweep of the analytic lemmas.
    Lemmas(LemmasArgs),
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAILED_CHECK: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Count(a) => commands::count(a, argv),
        Command::Bound(a) => commands::bound(a, argv),
        Command::Verify(a) => commands::verify(a, argv),
        Command::Lemmas(a) => commands::lemmas(a, argv),
        Command::Gen(a) => commands::gen(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
