use std::process::ExitCode;

use clap::Parser;
use stretch_lab::commands::emit;
use stretch_lab::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|text| emit(&text, cli.command.args().output.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stretch-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
