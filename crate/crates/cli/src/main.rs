use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = hermvar_cli::Cli::parse();
    match hermvar_cli::main_with(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
