//! `hk`: batch front end for the `hk-core` computations.
//!
//! Every command prints one result envelope
//! `{status, payload, residuals, provenance}` and exits with
//! 0 (ok), 2 (rejected input), 3 (inconsistency) or 4 (inconclusive search).

pub mod commands;
pub mod error;
pub mod formats;
pub mod report;
pub mod verify;

use clap::{Parser, Subcommand, ValueEnum};

use crate::report::{Outcome, Provenance, Status};

pub const SEED_ENV: &str = "HK_SEED";

#[derive(Debug, Parser)]
#[command(name = "hk", version, about = "Exact and numerical computations for hyperkähler geometry")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized commands; defaults to $HK_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Numerical tolerance where a command uses one.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Truncation order for series.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integral lattices.
    #[command(subcommand)]
    Lattice(commands::lattice::LatticeCmd),
    /// Beauville–Bogomolov form and Fujiki relation.
    #[command(subcommand)]
    Bb(commands::bb::BbCmd),
    /// Period domain and twistor conics.
    #[command(subcommand)]
    Period(commands::period::PeriodCmd),
    /// Curvature, transport and holonomy on charts.
    #[command(subcommand)]
    Riemann(commands::riemann::RiemannCmd),
    /// Characteristic numbers and curve counts.
    #[command(subcommand)]
    Count(commands::count::CountCmd),
    /// Run the built-in acceptance checks.
    Verify(verify::VerifyArgs),
}

/// Settings shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct Globals {
    pub seed: u64,
    pub tol: Option<f64>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs `argv` (program name first) with the default seed read from `HK_SEED`.
pub fn run<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with_default_seed(argv, env_seed.as_deref())
}

pub fn run_with_default_seed<I, T>(argv: I, default_seed: Option<&str>) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Execution { stdout: text, stderr: String::new(), code: 0 }
                }
                _ => Execution { stdout: String::new(), stderr: text, code: Status::Rejected.exit_code() },
            };
        }
    };
    let seed = match (cli.seed, default_seed) {
        (Some(s), _) => s,
        (None, Some(text)) => match text.trim().parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                return Execution {
                    stdout: String::new(),
                    stderr: format!("{SEED_ENV} must be a nonnegative integer, got {text:?}\n"),
                    code: Status::Rejected.exit_code(),
                }
            }
        },
        (None, None) => 0,
    };
    let globals = Globals { seed, tol: cli.tol, order: cli.order };
    let outcome = dispatch(&cli.command, &globals).unwrap_or_else(|e| Outcome::from_error(&e));
    let envelope = report::envelope(&outcome, &Provenance { args: &argv[1..], seed });
    let stdout = match cli.format {
        Format::Json => report::render_json(&envelope),
        Format::Table => report::render_table(&envelope),
    };
    Execution { stdout, stderr: String::new(), code: outcome.status.exit_code() }
}

fn dispatch(command: &Command, g: &Globals) -> error::CliResult<Outcome> {
    match command {
        Command::Lattice(c) => commands::lattice::run(c, g),
        Command::Bb(c) => commands::bb::run(c, g),
        Command::Period(c) => commands::period::run(c, g),
        Command::Riemann(c) => commands::riemann::run(c, g),
        Command::Count(c) => commands::count::run(c, g),
        Command::Verify(a) => verify::run(a, g),
    }
}
