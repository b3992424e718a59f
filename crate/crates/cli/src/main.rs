use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qchain_cli::args::Cli::parse();
    match qchain_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, qchain_cli::CliError::ChecksFailed { .. }) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
