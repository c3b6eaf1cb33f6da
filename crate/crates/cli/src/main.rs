mod commands;
mod config;
mod data;
mod output;
mod suite;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{Flags, RunConfig};
use suite::SuiteName;

/// Speh representations of GL_n(F_q), their (k,c) Whittaker models and gamma factors.
#[derive(Debug, Parser)]
#[command(name = "finspeh", version)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the irreducible cuspidal representations of GL_n(F_q) (n from --n, else --k).
    Cuspidals,
    /// Dimensions and sanity values of the Speh representation of τ.
    Speh,
    /// Tabulate the Bessel–Speh function.
    BesselSpeh {
        /// Every element of GL_{kc} instead of the B̃ arguments.
        #[arg(long)]
        all: bool,
    },
    /// Finite gamma factors of π × τ for every π (or the one chosen with --pi).
    Gamma,
    /// Level-zero local gamma factors for unramified lifts, as rational functions.
    LocalGamma,
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteName,
        /// Perturb the gamma factors by this amount (control for the checks themselves).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
    },
}

/// An error caused by the invocation rather than the computation (exit code 3).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

const EXIT_FAIL: u8 = 1;
const EXIT_CAPACITY: u8 = 2;
const EXIT_USAGE: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    use finspeh::error::Error;
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity(_)) => EXIT_CAPACITY,
        Some(Error::Domain(_) | Error::Inconsistent(_) | Error::Unsupported(_)) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Rows wrapped as the JSON document and kept flat for CSV.
fn table(rows: Vec<Value>) -> (Value, Vec<Value>) {
    (Value::Array(rows.clone()), rows)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::resolve(&cli.flags).map_err(|e| Usage(format!("{e:#}")))?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    let (doc, rows, passed) = match cli.command {
        Command::Cuspidals => {
            let (d, r) = table(commands::cuspidals(&cfg)?);
            (d, r, true)
        }
        Command::Speh => {
            let (d, r) = table(commands::speh(&cfg)?);
            (d, r, true)
        }
        Command::BesselSpeh { all } => {
            let (d, r) = table(commands::bessel_speh(&cfg, all)?);
            (d, r, true)
        }
        Command::Gamma => {
            let (d, r) = table(commands::gamma(&cfg)?);
            (d, r, true)
        }
        Command::LocalGamma => {
            let (d, r) = table(commands::local_gamma_rows(&cfg)?);
            (d, r, true)
        }
        Command::Verify { suite, perturb } => {
            let reports = suite::run(&cfg, suite, perturb)?;
            for r in &reports {
                eprintln!("{}: {} ({:.2} s)", r.suite, if r.passed() { "pass" } else { "fail" }, r.runtime_s);
            }
            let passed = reports.iter().all(|r| r.passed());
            let doc = json!({
                "status": if passed { "pass" } else { "fail" },
                "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            let rows = reports.iter().flat_map(|r| r.csv_rows()).collect();
            (doc, rows, passed)
        }
    };
    output::emit(&cfg, &doc, &rows)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
