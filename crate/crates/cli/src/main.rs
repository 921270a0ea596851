//! `purify`: scenario-driven front end for the measurement-purification
//! library. `run` iterates a protocol, `sweep` maps parameter regions,
//! `verify` cross-checks every closed form against brute-force numerics.
//!
//! Exit codes: 0 success, 1 internal or verification failure, 2 bad
//! scenario, 3 degenerate leading eigenvalues, 4 yield underflow, 5 sweep
//! grid over budget.

mod commands;
mod error;
mod output;
mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use output::FileFormat;

#[derive(Parser)]
#[command(name = "purify", version, about = "Repeated-measurement purification toolkit")]
struct Cli {
    /// Seed for random initial states and verification draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file path, overriding the scenario's output section.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format, overriding the scenario; `json` also switches error
    /// reporting on stderr to a machine-readable JSON object.
    #[arg(long, global = true, value_enum)]
    format: Option<FileFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a scenario and write one row per measurement cycle.
    Run { scenario: PathBuf },
    /// Score a parameter grid and write one row per point.
    Sweep { scenario: PathBuf },
    /// Run the closed-form duality table and report per-family residuals.
    Verify,
}

fn main() {
    let cli = Cli::parse();
    let opts = commands::OutputOpts {
        path_flag: cli.output.clone(),
        format_flag: cli.format,
        seed: cli.seed,
    };
    let result = match &cli.command {
        Command::Run { scenario } => commands::cmd_run(scenario, &opts),
        Command::Sweep { scenario } => commands::cmd_sweep(scenario, &opts),
        Command::Verify => commands::cmd_verify(cli.seed),
    };
    if let Err(e) = result {
        if cli.format == Some(FileFormat::Json) {
            let doc = serde_json::json!({
                "error": {
                    "exit_code": e.exit_code(),
                    "kind": e.kind(),
                    "message": e.to_string(),
                }
            });
            eprintln!("{doc}");
        } else {
            eprintln!("error: {e}");
        }
        std::process::exit(e.exit_code());
    }
}
