mod args;
mod commands;
mod error;
mod files;

use std::process::ExitCode;

use clap::Parser;

use args::{BuildCommand, Cli, Command};
use error::CliError;

fn run(cli: Cli) -> error::CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Sieve(a) => commands::sieve::run(a),
        Command::Build(BuildCommand::Block(a)) => commands::build::block(a),
        Command::Build(BuildCommand::Readout(a)) => commands::build::readout(a),
        Command::Analyze(a) => commands::analyze::run(a),
        Command::Correlate(a) => commands::correlate::run(a),
        Command::Census(a) => commands::census::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Mixing(a) => commands::mixing::run(a),
        Command::ReproduceFigures(a) => commands::figures::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toeplitz: {e}");
            e.exit_code()
        }
    }
}
