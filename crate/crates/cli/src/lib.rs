//! Command-line front end for `intricacy-core`: configuration, JSON input,
//! CSV/JSON output, parallel drivers and the property-check suites.

pub mod cache;
pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod reference;

use std::io::Write;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, Result};
pub use output::Table;

/// Output table and number of failed property checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failures: usize,
}

/// Run the configured subcommand on the configured thread pool.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.opts.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.opts.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::bad(format!("cannot start worker threads: {e}")))?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &RunConfig) -> Result<Outcome> {
    let opts = &config.opts;
    let table = match config.command {
        Command::Topo => commands::topo(opts)?,
        Command::Pressure => commands::pressure(opts)?,
        Command::Markov => commands::markov(opts)?,
        Command::Sweep => commands::sweep(opts)?,
        Command::Check => {
            let results = check::run_suites(&opts.suite, opts.max_n)?;
            let failures = results.iter().filter(|r| !r.passed()).count();
            return Ok(Outcome { table: check::to_table(&results), failures });
        }
    };
    Ok(Outcome { table, failures: 0 })
}

/// Write the outcome to `--output` or standard output.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> Result<()> {
    let bytes = outcome.table.to_bytes(config.opts.format)?;
    match &config.opts.output {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout().lock().write_all(&bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}
