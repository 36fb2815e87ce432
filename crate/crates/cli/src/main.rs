use std::io;
use std::process::ExitCode;

use clap::Parser;
use smallsphere_core::Error;

mod commands;
mod config;

use config::{Cli, Command, CommandKind, RunConfig};

/// Input problems exit with 2, anything else that stops a run with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse(_) | Error::Arith(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Verify(a) => (CommandKind::Verify, a),
        Command::Expand(a) => (CommandKind::Expand, a),
        Command::Oracle(a) => (CommandKind::Oracle, a),
    };
    let result = RunConfig::new(kind, args).and_then(|config| {
        let mut stdout = io::stdout().lock();
        match kind {
            CommandKind::Verify => commands::verify(&config, &mut stdout),
            CommandKind::Expand => commands::expand(&config, &mut stdout),
            CommandKind::Oracle => commands::oracle(&config, &mut stdout),
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
