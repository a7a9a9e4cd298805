use std::process::ExitCode;

use clap::Parser;
use intricacy::{emit, run, CliError, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&config).and_then(|outcome| {
        emit(&config, &outcome)?;
        match outcome.failures {
            0 => Ok(()),
            failed => Err(CliError::CheckFailed { failed }),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("intricacy: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
