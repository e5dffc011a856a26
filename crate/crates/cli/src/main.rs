use std::process::ExitCode;

use clap::Parser;
use ensc_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(summary) => {
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
