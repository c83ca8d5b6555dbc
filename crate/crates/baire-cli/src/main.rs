//! `baire`: runs solvers, converters and constructions on instance files.
//!
//! Exit status is 0 on success, 2 when a fuel or stage budget ran out before
//! an answer was certain, and 1 on invalid input or a failed verification.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::{Failure, Status};

#[derive(Parser)]
#[command(
    name = "baire",
    version,
    about = "Baire category solvers on Cantor and Baire space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Instance file.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Depth of printed truncations and checks.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Search budget: enumeration positions, dovetailing steps or stages.
    /// Each command has its own default.
    #[arg(long)]
    pub fuel: Option<u64>,
    /// Seed for sampling; exhaustive modes consume no randomness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trace as JSON lines to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Point avoiding a nowhere dense negative family.
    Bct0(Common),
    /// The first COUNT distinct answers of the diagonalizer.
    Dbct0 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        count: u64,
    },
    /// Mind-change search for a set with interior in a negative cover.
    Bct1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 256)]
        stages: u64,
        #[arg(long, default_value_t = 4096)]
        code_cap: u64,
    },
    /// Limit diagonalizer for positive or negjump families.
    Bct2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 256)]
        stages: u64,
    },
    /// Limit search for a set with interior in a positive cover, or the
    /// isolated-point shortcut for `isolated` instances.
    Bct3 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 256)]
        stages: u64,
        #[arg(long, default_value_t = 4096)]
        code_cap: u64,
    },
    /// Cluster point of a sequence of naturals, in the limit.
    Cln {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        stages: u64,
    },
    /// Converts a closed set between representations.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Stages sampled when writing a negjump result.
        #[arg(long, default_value_t = 64)]
        stages: u64,
        /// Columns sampled when writing a negjump result.
        #[arg(long, default_value_t = 64)]
        columns: u64,
    },
    /// Positive superset of the boundary of a negative set.
    Boundary(Common),
    /// Embeds a Baire point, or solves a Baire family through Cantor space.
    Embed {
        #[command(flatten)]
        common: Common,
        /// Escape rounds of the transfer chain.
        #[arg(long, default_value_t = 8)]
        rounds: u64,
    },
    /// Pulls a negative metric set back to Baire space.
    Preimage(Common),
    /// One run, an exhaustive census or a sampled census of the advice algorithm.
    Fireworks {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Comma-separated advice blocks for a single run.
        #[arg(long, value_delimiter = ',')]
        advice: Vec<u64>,
        #[arg(long)]
        census: bool,
        #[arg(long, default_value_t = 1)]
        imax: u64,
        /// Sample this many advice tuples instead of enumerating.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = false)]
        sequential: bool,
    },
    /// The finite tree approximation at stage M.
    Tree {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Explicit comeager families.
    Comeager {
        #[command(subcommand)]
        family: ComeagerCommand,
    },
    /// Evaluates the betting strategy built from an approximation and a point.
    Martingale {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        oracle: PathBuf,
        /// Point file; defaults to the witness point for `--rounds`.
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<String>,
        /// Report capital on the limit prefixes of length 3n for n = 1..=ROUNDS.
        #[arg(long, default_value_t = 8)]
        rounds: u64,
    },
    /// Checks a result file against its instance.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        result: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComeagerCommand {
    /// Sets whose complement union has no point computed by the table.
    Noncomputable {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        table: PathBuf,
    },
    /// Sets excluding points whose gaps stay below the modulus.
    LowOmega {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 0)]
        i: u64,
    },
}

impl Common {
    pub fn fuel_or(&self, default: u64) -> u64 {
        self.fuel.unwrap_or(default)
    }
}

fn run(cli: Cli) -> Result<Status, Failure> {
    use commands::*;
    match cli.command {
        Command::Bct0(c) => bct0(&c),
        Command::Dbct0 { common, count } => dbct0(&common, count),
        Command::Bct1 {
            common,
            stages,
            code_cap,
        } => bct1(&common, stages, code_cap),
        Command::Bct2 { common, stages } => bct2(&common, stages),
        Command::Bct3 {
            common,
            stages,
            code_cap,
        } => bct3(&common, stages, code_cap),
        Command::Cln { common, stages } => cln(&common, stages),
        Command::Convert {
            common,
            from,
            to,
            stages,
            columns,
        } => convert(&common, &from, &to, stages, columns),
        Command::Boundary(c) => boundary(&c),
        Command::Embed { common, rounds } => embed(&common, rounds),
        Command::Preimage(c) => preimage(&c),
        Command::Fireworks {
            common,
            k,
            advice,
            census,
            imax,
            sample,
            sequential,
        } => fireworks(
            &common,
            FireworksMode::new(k, advice, census, imax, sample, sequential),
        ),
        Command::Tree { common, k, m } => tree(&common, k, m),
        Command::Comeager {
            family: ComeagerCommand::Noncomputable { common, table },
        } => noncomputable(&common, &table),
        Command::Comeager {
            family: ComeagerCommand::LowOmega { common, oracle, i },
        } => low_omega(&common, &oracle, i),
        Command::Martingale {
            common,
            oracle,
            point,
            sigma,
            rounds,
        } => martingale(&common, &oracle, point.as_deref(), sigma.as_deref(), rounds),
        Command::Verify { common, result } => verify::verify(&common, &result),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(2),
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(1)
        }
    }
}
