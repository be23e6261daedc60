//! Command-line front end for `tracelab_core`.
//!
//! Every command produces a [`Report`]: a JSON envelope
//! `{schema_version, config, results, derived_bounds, timings}` or, with
//! `--format csv`, a flat table with a header row.

pub mod args;
pub mod commands;
pub mod error;
pub mod inputs;
pub mod output;
pub mod sweep;

use serde_json::json;

pub use args::Cli;
pub use error::{CliError, Result};
pub use output::Report;

use output::{Stopwatch, SCHEMA_VERSION};

/// Thread count from `--threads` / `TRACELAB_THREADS`, else the available
/// parallelism.
pub fn thread_count(cli: &Cli) -> Result<usize> {
    match cli.threads {
        Some(0) => Err(error::config("--threads must be at least 1")),
        Some(t) => Ok(t),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs the command on a dedicated pool of the requested size.
pub fn run(cli: &Cli) -> Result<Report> {
    let threads = thread_count(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| error::config(format!("cannot start {threads} threads: {e}")))?;
    let mut watch = Stopwatch::default();
    let outcome = pool.install(|| commands::dispatch(&cli.command, &mut watch))?;
    let mut config = serde_json::to_value(&cli.command)?;
    config["threads"] = json!(threads);
    config["format"] = serde_json::to_value(cli.format)?;
    config["out"] = json!(cli.out);
    config["resolved"] = outcome.resolved;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        config,
        results: outcome.results,
        derived_bounds: outcome.derived_bounds,
        timings: watch.finish(),
        table: outcome.table,
    })
}
