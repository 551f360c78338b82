use std::process::ExitCode;

use bidisk_cli::{run, Cli, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let CliError::Failed(report) = &err {
                print!("{report}");
            }
            eprintln!("error: {}: {err}", err.name());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
