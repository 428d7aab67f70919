use std::process::ExitCode;

use clap::Parser;
use ramify::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ramify::run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.manifest_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ramify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
