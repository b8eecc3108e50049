use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use dynroc_cli::{execute, Args, RunConfig};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| execute(&cfg));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dynroc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
