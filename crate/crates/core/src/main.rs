use std::io;
use std::process::ExitCode;

use axcount::cli::{dispatch, RunConfig, EXIT_OK, EXIT_USAGE};
use clap::Parser;

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    match dispatch(&config, &mut out, &mut err) {
        Ok(record) => ExitCode::from(record.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
