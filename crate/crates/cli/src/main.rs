use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "qcsp", version, about = "Quantified constraint satisfaction toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random corpus.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relation tables may hold at most 2^N slots. Overrides QCSP_MAX_POSITIONS.
    #[arg(long, global = true, value_name = "N")]
    pub max_positions: Option<u32>,

    /// Directory for emitted files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a .qcsp sentence.
    Solve {
        path: PathBuf,
        /// Print the winning strategy's Skolem tables.
        #[arg(long)]
        strategy: bool,
        /// Confine the universal player to the plays listed in FILE.
        #[arg(long, value_name = "FILE", conflicts_with = "pi2")]
        restrict: Option<PathBuf>,
        /// Use the Π₂ solver for the six-element language.
        #[arg(long)]
        pi2: bool,
    },
    /// Solve a .qcsp instance whose prefix is purely existential.
    Csp {
        path: PathBuf,
        /// Also print the arc-consistent domains.
        #[arg(long)]
        ac: bool,
    },
    /// Build the induced CSP of ∃y₀∀x₁∃y₁…∀xₙ∃yₙ R.
    Induced {
        /// .rel file holding R.
        rel: PathBuf,
        /// Relation name (default: the first in the file).
        #[arg(long)]
        relation: Option<String>,
        /// Number of rounds n; R must have arity 2n+1.
        #[arg(long)]
        rounds: usize,
        /// Also decide it and print the equivalence report.
        #[arg(long)]
        check: bool,
    },
    /// Encode a quantified formula as a QCSP instance.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        input: PathBuf,
    },
    /// Compute 𝒯^Φ(V₀,V₁) for a quantified 3-DNF in QDIMACS form.
    Tphi { input: PathBuf },
    /// Mighty-tuple tools.
    Mighty {
        #[command(subcommand)]
        action: MightyAction,
    },
    /// Check whether the operation g preserves relations.
    Poly {
        /// .rel file to check; default is the six-element language and its constants.
        rel: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        /// One of: polymorphism, delta1, equivalence, tphi, q3cnf, pi2-encoder,
        /// pi2-solver, factorial, mighty, claims, restricted, arc-consistency.
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        /// Domain size for the equivalence suite.
        #[arg(long)]
        size: Option<usize>,
        /// Variable bound for the exhaustive suites.
        #[arg(long)]
        max_vars: Option<usize>,
    },
    /// Time the solvers on a seeded corpus.
    Bench {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MightyAction {
    /// Check the conditions of a mighty tuple stored in a .rel file.
    ///
    /// Relations are looked up by role name: Q, D, B, C and Delta as the kind
    /// requires.
    Check { kind: String, rel: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ReduceKind {
    Q3cnf,
    #[value(name = "pi2-1in3")]
    Pi21in3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
