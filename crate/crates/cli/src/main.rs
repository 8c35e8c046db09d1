mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gk_core::Error;

use args::{Cli, Command};

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundExhausted(_) => 4,
        Error::Unknown { .. } | Error::Parse(_) => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> gk_core::Result<String> {
    match &cli.command {
        Command::Factor(a) => commands::factor(a),
        Command::Expand(a) => commands::expand(a),
        Command::Mul(a) => commands::mul(a),
        Command::Inv(a) => commands::inv(a),
        Command::Confining(c) => commands::confining(c),
        Command::Wordlen(a) => commands::wordlen(a),
        Command::Normalform(a) => commands::normalform(a),
        Command::Tree(c) => commands::tree(c),
        Command::Plane(c) => commands::plane(c),
        Command::Poset(a) => commands::poset(a),
        Command::Bns(a) => commands::bns(a),
        Command::Delta(a) => commands::delta(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
