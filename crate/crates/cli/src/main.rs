mod args;
mod commands;

use std::process;

use clap::Parser;

use args::{config_path, merge_config, Cli, Command};
use commands::CliError;

fn run() -> Result<(), CliError> {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(path) = config_path(&argv) {
        let text = std::fs::read_to_string(&path).map_err(|source| sigcond::Error::Io { path, source })?;
        argv = merge_config(argv, &text).map_err(CliError::Usage)?;
    }
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match &cli.command {
        Command::Detect(a) => commands::detect(a),
        Command::Eval(a) => commands::eval(a),
        Command::SweepSigma(a) => commands::sweep(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Check(a) => commands::check(a),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("sigcond: {e}");
        process::exit(e.exit_code());
    }
}
