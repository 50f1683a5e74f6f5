use std::process::ExitCode;

use clap::Parser;
use qcasc_cli::{run, CliError, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CliError::Validation(String::new()).exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcasc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
