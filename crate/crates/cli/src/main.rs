//! `akns-multiform`: derive coefficient tables and run verification suites.

mod derive;
mod record;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "akns-multiform", version, about = "Exact multiform computations for the AKNS hierarchy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a coefficient: L_ij, H_ij, omega_k, a flow or a Lax matrix.
    Derive(DeriveArgs),
    /// Run verification checks and report PASS/FAIL records.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "L")]
    Lagrangian,
    #[value(name = "H")]
    Hamiltonian,
    #[value(name = "omega")]
    Omega,
    #[value(name = "flow")]
    Flow,
    #[value(name = "lax")]
    Lax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Ef,
    Qr,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[arg(value_enum)]
    pub quantity: Quantity,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub time: Option<u32>,
    /// Phase variable for `flow`, e.g. `e3`.
    #[arg(long)]
    pub var: Option<String>,
    #[arg(long, value_enum, default_value = "ef")]
    pub coords: Coords,
    /// Truncation order; defaults to the minimum the request needs.
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    Darboux,
    Closure,
    El,
    Legendre,
    Omega1,
    Rmatrix,
    PbLemma,
    ZcHamiltonian,
    Conservation,
    Jacobi,
    FlowCommute,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long, default_value_t = 4)]
    pub max_time: u32,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Single time for `darboux`, `rmatrix` and `pb-lemma` (same as `--k`).
    #[arg(long)]
    pub time: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub order: Option<u32>,
}

/// A request the engine cannot serve; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<akns_multiform::Error> for UsageError {
    fn from(e: akns_multiform::Error) -> Self {
        UsageError(e.to_string())
    }
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var("AKNS_MULTIFORM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| UsageError(format!("AKNS_MULTIFORM_THREADS must be an integer >= 1, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    configure_threads()?;
    match cli.command {
        Command::Derive(args) => {
            println!("{}", derive::derive(&args)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let records = verify::verify(&args)?;
            let out = match args.format {
                Format::Text => record::render_text(&records),
                Format::Json => record::render_json(&records),
            };
            print!("{out}");
            let failed = records.iter().any(|r| r.status == record::Status::Fail);
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
