use std::process::ExitCode;

use clap::Parser;
use mergeconv_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err((err, report)) => {
            if let Some(text) = report {
                println!("{text}");
            }
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
