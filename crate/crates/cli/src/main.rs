//! `nmono`: exact verdicts on lower previsions and exact functionals from a
//! JSON problem document.
//!
//! Exit status is 0 for positive verdicts and successful computations, 1
//! when a verdict is negative (the witness is printed), and 2 for invalid
//! input.

mod commands;
mod document;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmono::monotone::Order;

#[derive(Debug, Parser)]
#[command(name = "nmono", version, about = "Coherence, exactness and n-monotonicity checks in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Problem document (JSON, schema nmono/v1).
    pub document: PathBuf,
    /// Re-check the witnesses in a report previously printed by the same
    /// command instead of computing a new one.
    #[arg(long, value_name = "REPORT")]
    pub verify_witness: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Natural extension of a lower prevision (norm one).
    Prevision,
    /// Natural extension of an exact functional, preserving its norm.
    Exact,
}

#[derive(Debug, Args)]
pub struct MonotoneArgs {
    #[command(flatten)]
    pub input: Input,
    /// Order to check: a positive integer or `inf`. Defaults to the
    /// document's `queries.n`.
    #[arg(long, value_parser = document::parse_order)]
    pub n: Option<Order>,
    /// Only use the event entries of the assessment.
    #[arg(long, conflicts_with = "gambles")]
    pub events: bool,
    /// Use every entry of the assessment (the default).
    #[arg(long)]
    pub gambles: bool,
    /// Extend the assessment to the lattice closure of its domain by
    /// natural extension first.
    #[arg(long)]
    pub close: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Does the assessment avoid sure loss?
    CheckAsl(Input),
    /// Is the assessment a coherent lower prevision?
    CheckCoherent(Input),
    /// Is the assessment an exact functional?
    CheckExact(Input),
    /// The norm, with the attainment interval of every domain gamble.
    Norm(Input),
    /// Write an exact functional as its norm times a coherent lower prevision.
    Decompose(Input),
    /// Natural extension at a gamble (or at every query gamble).
    Natext {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        gamble: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Prevision)]
        mode: Mode,
    },
    /// Inner set function at an event, or inner extension at a gamble.
    Inner {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "gamble")]
        event: Option<String>,
        #[arg(long)]
        gamble: Option<String>,
    },
    /// n-monotonicity of the assessment on its lattice domain.
    Nmono(MonotoneArgs),
    /// n-alternation, i.e. n-monotonicity of the conjugate.
    Nalt(MonotoneArgs),
    /// Möbius transform of a set function on every event.
    Mobius(Input),
    /// Choquet integral against the assessed set function.
    Choquet {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        gamble: Option<String>,
    },
    /// Comonotone additivity on every comonotone pair of domain gambles.
    Comadd {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        close: bool,
    },
    /// A dominating functional attaining the lower values of two gambles.
    Attain {
        #[command(flatten)]
        input: Input,
        #[arg(long, requires = "g")]
        f: Option<String>,
        #[arg(long, requires = "f")]
        g: Option<String>,
    },
    /// Vacuous lower prevision relative to an event.
    Vacuous {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        event: String,
        #[arg(long)]
        gamble: Option<String>,
    },
    /// Lattice closure of the query gambles, or of the assessment domain.
    /// The element budget comes from NMONO_CLOSURE_BUDGET.
    Closure { document: PathBuf },
    /// Parse the document and print it back.
    Fmt { document: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.text);
            ExitCode::from(if outcome.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
