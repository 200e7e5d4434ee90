mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Output};

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Solve(a) => commands::solve_cmd(a),
        Command::Batch(a) => commands::batch_cmd(a),
        Command::Gen(a) => commands::gen_cmd(a),
        Command::Bench(a) => commands::bench_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            match output.verification_failure {
                Some(why) => {
                    eprintln!("verification failed: {why}");
                    ExitCode::from(2)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
