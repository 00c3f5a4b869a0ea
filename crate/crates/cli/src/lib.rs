//! Command-line front end: `run <scenario.json>` executes one configured
//! scenario and writes its artifacts; `verify <module|all>` runs the seeded
//! invariant suites. Exit codes: 0 success, 2 schema error, 3 numerical
//! invariant violation, 4 non-convergence.

pub mod artifacts;
pub mod run;
pub mod scenario;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "intercept",
    about = "Optimal vehicle placement against targets appearing on a segment",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for randomized suites; overrides the scenario's `seed` field.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory artifacts are written into.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Emit an SVG snapshot every K rounds in multi-lloyd mode.
    #[arg(long, global = true, default_value_t = 10, value_name = "K")]
    pub svg_every: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Execute a scenario file and write its artifacts.
    Run { file: PathBuf },
    /// Run the invariant suite of one module, or "all".
    Verify { selector: String },
}

pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file } => run_scenario(&file, &cli.out, cli.svg_every, cli.seed),
        Command::Verify { selector } => {
            run_verification(&selector, &cli.out, cli.seed.unwrap_or(42))
        }
    }
}

pub fn run_scenario(file: &Path, out: &Path, svg_every: usize, seed: Option<u64>) -> i32 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "schema error: cannot read scenario file {}: {e}",
                file.display()
            );
            return 2;
        }
    };
    let scenario = match scenario::Scenario::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    match run::execute(&scenario, out, svg_every, seed) {
        Ok(outcome) => {
            println!("{}", outcome.summary.render());
            if outcome.converged {
                0
            } else {
                eprintln!(
                    "non-convergence: solver budget exhausted in mode {}",
                    scenario.mode.name()
                );
                4
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn run_verification(selector: &str, out: &Path, seed: u64) -> i32 {
    match verify::run_verify(selector, seed) {
        Ok(outcome) => {
            if let Err(e) = verify::write_report(out, selector, &outcome.report_json) {
                eprintln!("io error: {e}");
                return 1;
            }
            if outcome.all_pass {
                println!("verify {selector}: all checks passed");
                0
            } else {
                eprintln!("verify {selector}: some checks FAILED");
                3
            }
        }
        Err(e) => {
            eprintln!("schema error: {e}");
            2
        }
    }
}
