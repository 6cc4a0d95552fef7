use std::process::ExitCode;

use clap::Parser;
use qgcl::commands::{cmd_gen, cmd_solve, cmd_sweep, Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args).map(|()| 0),
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args).map(|_| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
