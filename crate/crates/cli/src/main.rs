use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use willmore_cli::commands::run;
use willmore_cli::config::{Cli, RunConfig};
use willmore_cli::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail(CliError::invalid(first));
        }
    };
    match RunConfig::resolve(cli).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_record());
    ExitCode::from(e.exit_code() as u8)
}
