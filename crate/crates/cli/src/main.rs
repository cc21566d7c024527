use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod failure;
mod output;

use args::{Cli, Command};
use failure::{CmdResult, Failure};

fn dispatch(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Search(a) => commands::search::run(g, a),
        Command::Construct(a) => commands::construct::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Stats(a) => commands::tables::stats(g, a),
        Command::Figure(a) => commands::tables::figure(g, a),
        Command::Continue(a) => commands::continuation::run(g, a),
        Command::VerifyAnalytic(a) => commands::analytic::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.global.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
        {
            eprintln!("error: {}", Failure::usage(e));
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
