mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli).and_then(|artifact| output::emit(&cli, &artifact)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wlbounds: {e}");
            e.exit_code()
        }
    }
}
