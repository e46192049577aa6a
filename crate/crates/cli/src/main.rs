use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::Cli;
use commands::{CliError, Output};

const EXIT_USAGE: u8 = 2;
const EXIT_MODEL: u8 = 3;

fn write_output(out: &Output, target: Option<&std::path::Path>) -> std::io::Result<()> {
    for (path, text) in &out.side_files {
        std::fs::write(path, text)?;
    }
    match target {
        Some(path) => std::fs::write(path, &out.main),
        None => std::io::stdout().lock().write_all(out.main.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => match write_output(&out, cli.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_MODEL)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_MODEL)
        }
    }
}
