use std::process::ExitCode;

use clap::Parser;
use semicert_cli::commands::{run, Cli};
use semicert_cli::ERROR_EXIT;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ERROR_EXIT as u8);
        }
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, &outcome.body).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{}", outcome.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(ERROR_EXIT as u8);
    }
    ExitCode::from(outcome.status.code() as u8)
}
