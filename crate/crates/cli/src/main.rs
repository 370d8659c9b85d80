//! `normalens` command-line harness. Every subcommand prints one JSON object to
//! standard output and exits 0 on success, 1 when a check fails, 2 on invalid input.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::{InputError, SCHEMA_VERSION};

fn configure_threads() -> Result<(), InputError> {
    let Ok(raw) = std::env::var("NORMALENS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        InputError::new(
            "invalid_environment",
            format!("NORMALENS_THREADS={raw:?} is not a positive integer"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| InputError::new("invalid_environment", e.to_string()))
}

fn fail(err: InputError) -> ExitCode {
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": err.kind, "message": err.message },
    });
    println!("{body}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            return fail(InputError::new("usage", first));
        }
    };
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    let outcome = match &cli.command {
        Command::KernelGrid(a) => commands::kernel_grid_cmd(a),
        Command::ErrorTable(a) => commands::error_table_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::SpacingCheck(a) => commands::spacing_cmd(a),
        Command::Sample(a) => commands::sample_cmd(a),
        Command::Density(a) => commands::density_cmd(a),
    };
    match outcome {
        Ok(o) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&o.report).unwrap_or_else(|_| "{}".into())
            );
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(e),
    }
}
