use std::process::ExitCode;

use clap::Parser;
use solgeom_cli::{execute, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Outcome::Report { report, exit } => {
            print!("{}", report.to_json());
            ExitCode::from(exit)
        }
        Outcome::ConfigFailure { message } => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
