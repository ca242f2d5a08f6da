mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out.clone(),
        format: cli.format,
        quiet: cli.quiet,
    };
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Bounds(a) => commands::bounds(&ctx, a),
        Command::Search(a) => commands::search(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Construct(a) => commands::construct_cmd(&ctx, a),
        Command::Partition(a) => commands::partition_cmd(&ctx, a),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
