use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = pvoros::cli::Cli::parse();
    match pvoros::cli::run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pvoros: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
