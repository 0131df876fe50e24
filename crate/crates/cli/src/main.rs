//! `petersburg`: evaluate, solve and simulate St. Petersburg-type gambles.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 undefined outcome
//! (bankruptcy risk or a bankrupt simulated trajectory).

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "petersburg",
    version,
    about = "St. Petersburg lottery under time and ensemble averages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every decision criterion at one (wealth, price) pair.
    Evaluate(EvaluateArgs),
    /// Break-even price curve c*(w), or ḡ(w) at a fixed price with --inset.
    Breakeven(BreakevenArgs),
    /// Monte Carlo estimates of the time, ensemble or sub-interval average.
    Simulate(SimulateArgs),
    /// Two-step criterion with Menger's payouts over a price grid.
    Menger(MengerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Time,
    Ensemble,
    Subinterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MengerWealthArg {
    PerRound,
    Initial,
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// bernoulli | menger | capped:<max payout> | table:<csv path>
    #[arg(long, default_value = "bernoulli")]
    pub payout: String,
    /// Probability of tails on each toss.
    #[arg(long, default_value_t = 0.5)]
    pub geom_p: f64,
    /// Tail-bound target for convergent series.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub wealth: f64,
    #[arg(long)]
    pub price: f64,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Clone, Args)]
pub struct BreakevenArgs {
    #[arg(long, default_value_t = 1.0)]
    pub wmin: f64,
    #[arg(long, default_value_t = 1e6)]
    pub wmax: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Emit ḡ(w, price) instead of c*(w); requires --price.
    #[arg(long, requires = "price")]
    pub inset: bool,
    #[arg(long)]
    pub price: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub solver_tol: f64,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Mode::Time)]
    pub mode: Mode,
    #[arg(long)]
    pub wealth: f64,
    #[arg(long)]
    pub price: f64,
    #[arg(long, default_value_t = 10_000)]
    pub rounds: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 10_000)]
    pub subintervals: usize,
    /// Worker threads. Results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Include the wealth path (time mode).
    #[arg(long)]
    pub path: bool,
    /// Wealth that scales Menger's payout in later rounds.
    #[arg(long, value_enum, default_value_t = MengerWealthArg::PerRound)]
    pub menger_wealth: MengerWealthArg,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Clone, Args)]
pub struct MengerArgs {
    #[arg(long)]
    pub wealth: f64,
    /// Number of gain terms kept in the partial-sum condition.
    #[arg(long, default_value_t = 1)]
    pub nmax: u64,
    #[command(flatten)]
    pub shared: Shared,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<petersburg::Error> for Failure {
    fn from(e: petersburg::Error) -> Self {
        Failure::usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

/// Rendered output plus the exit code it should be reported with.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Breakeven(a) => commands::breakeven(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Menger(a) => commands::menger(a),
    };
    match result {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
