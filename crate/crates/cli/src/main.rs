//! `majority`: tables, position queries, statistics, verification suites,
//! optimal-play traces and interactive play for the k-majority game.

mod commands;
mod error;
mod output;
mod play;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use majority_core::ballgame::AdversaryMode;
use majority_core::Position;

use crate::error::CliError;
use crate::output::Format;

/// Largest `n` (or position size) the CLI hands to the exhaustive solver
/// unless `--guard` says otherwise.
pub const SOLVER_GUARD: u32 = 24;

/// Caps the solver memo; exceeding the cap aborts the command.
pub const MEMO_LIMIT_VAR: &str = "MAJORITY_ORACLE_MEMO_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "majority", version, about = "Explore the k-majority comparison game")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for the solver's root search
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare solver values of K(n,k) with 2(n-k) - B(n-k)
    Table {
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value_t = SOLVER_GUARD)]
        guard: u32,
    },
    /// Value and optimal moves of a position (default: the starting position)
    Value {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        /// Position literal such as `[3,1]` or `[2,1^5]`
        #[arg(long)]
        position: Option<Position>,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long, default_value_t = SOLVER_GUARD)]
        guard: u32,
    },
    /// Subset statistics, delta values and the SW potential of a position
    Stats {
        #[arg(long)]
        position: Position,
        #[arg(long)]
        e: u32,
        /// Only report this order instead of 1..=e
        #[arg(long)]
        b: Option<u32>,
    },
    /// Run verification suites
    Verify {
        /// Suite name, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        max_sum: Option<u64>,
        /// Override the suite's solver scale guard
        #[arg(long)]
        guard: Option<u32>,
    },
    /// Play interactively on the terminal
    Play {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum, default_value_t = Role::Selector)]
        role: Role,
        #[arg(long, value_enum, default_value_t = AdversaryArg::Optimal)]
        adversary: AdversaryArg,
        #[arg(long, value_enum, default_value_t = Level::Balls)]
        level: Level,
        #[arg(long, value_enum, default_value_t = Phrasing::Colours)]
        phrasing: Phrasing,
        /// Save the ball-level transcript here (`.json` selects JSON)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = SOLVER_GUARD)]
        guard: u32,
    },
    /// Print the solver's principal variation from the starting position
    Trace {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = SOLVER_GUARD)]
        guard: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Selector,
    Assigner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Optimal,
    Sw,
}

impl From<AdversaryArg> for AdversaryMode {
    fn from(arg: AdversaryArg) -> Self {
        match arg {
            AdversaryArg::Optimal => AdversaryMode::Optimal,
            AdversaryArg::Sw => AdversaryMode::Sw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Balls,
    Weights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phrasing {
    /// "same colour" / "different colours"
    Colours,
    /// Knights and knaves: "says j is a knight" / "says j is a knave"
    Knights,
}

/// Settings shared by every command that builds a solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub threads: usize,
    pub memo_limit: Option<usize>,
}

impl SolverConfig {
    pub fn solver(&self, e: u32) -> majority_core::solver::Solver {
        majority_core::solver::Solver::new(e)
            .with_threads(self.threads)
            .with_memo_limit(self.memo_limit)
    }
}

fn memo_limit_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(MEMO_LIMIT_VAR) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{MEMO_LIMIT_VAR} must be a non-negative integer, got {raw:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(err) => Err(CliError::Usage(format!("{MEMO_LIMIT_VAR}: {err}"))),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let config = SolverConfig {
        threads: cli.threads,
        memo_limit: memo_limit_from_env()?,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let format = cli.format;
    let ok = match cli.command {
        Command::Table { max_n, guard } => commands::table(&mut out, format, config, max_n, guard)?,
        Command::Value {
            n,
            k,
            position,
            e,
            guard,
        } => commands::value(&mut out, format, config, n, k, position, e, guard)?,
        Command::Stats { position, e, b } => commands::stats(&mut out, format, &position, e, b)?,
        Command::Verify {
            suite,
            seed,
            trials,
            max_n,
            m,
            max_sum,
            guard,
        } => {
            let opts = majority_core::verify::SuiteOptions {
                seed,
                trials,
                max_n,
                m,
                max_sum,
                guard,
            };
            commands::verify(&mut out, format, &suite, &opts)?
        }
        Command::Play {
            n,
            k,
            role,
            adversary,
            level,
            phrasing,
            out: path,
            guard,
        } => {
            let settings = play::Settings {
                role,
                adversary: adversary.into(),
                level,
                phrasing,
                transcript: path,
                guard,
            };
            let stdin = io::stdin();
            play::play(stdin.lock(), &mut out, config, n, k, &settings)?
        }
        Command::Trace { n, k, guard } => commands::trace(&mut out, format, config, n, k, guard)?,
    };
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("majority: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
