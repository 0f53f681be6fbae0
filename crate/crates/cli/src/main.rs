mod cli;
mod commands;
mod config;
mod output;
mod subject;

use std::process::ExitCode;

use clap::Parser;
use digitlab::arith::EvalContext;
use digitlab::Error;

use cli::{Cli, Command, ExperimentCommand, TwistedCommand};
use commands::Env;
use output::Emitter;

/// 0 success, 2 usage, 3 invalid input, 4 certification failure,
/// 5 precision cap, 6 cache integrity or mismatch, 7 i/o.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 3,
        Error::Certification(_) => 4,
        Error::PrecisionCap { .. } => 5,
        Error::Integrity(_) | Error::SpecMismatch(_) => 6,
        Error::Io(_) => 7,
    }
}

fn command_name(c: &Command) -> String {
    let sub = match c {
        Command::Twisted(t) => match t {
            TwistedCommand::Height { .. } => " height",
            TwistedCommand::Search { .. } => " search",
            TwistedCommand::Infima { .. } => " infima",
            TwistedCommand::Gap { .. } => " gap",
            TwistedCommand::GapSuite { .. } => " gap-suite",
            TwistedCommand::Index { .. } => " index",
            TwistedCommand::Roth { .. } => " roth",
        },
        Command::Experiment(e) => match e {
            ExperimentCommand::ComplexityGrowth { .. } => " complexity-growth",
            ExperimentCommand::DigitChanges { .. } => " digit-changes",
            ExperimentCommand::GapSeriesChanges { .. } => " gap-series-changes",
        },
        _ => "",
    };
    let top = match c {
        Command::Digits(_) => "digits",
        Command::Complexity(_) => "complexity",
        Command::MorseHedlund(_) => "morse-hedlund",
        Command::Nbdc(_) => "nbdc",
        Command::Repetition(_) => "repetition",
        Command::Bounds(_) => "bounds",
        Command::Twisted(_) => "twisted",
        Command::GapSeries(_) => "gap-series",
        Command::Runs(_) => "runs",
        Command::Ridout(_) => "ridout",
        Command::Cugiani(_) => "cugiani",
        Command::Experiment(_) => "experiment",
    };
    format!("{top}{sub}")
}

fn run(argv: Vec<String>) -> Result<(), Error> {
    let argv = config::expand(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let ctx = EvalContext::new(cli.precision_bits)?;
    let canon = config::canonical(&argv);
    let emitter = Emitter {
        json: cli.json,
        csv: cli.csv,
        out: cli.out.clone(),
        hash: config::hash(&canon),
        command: command_name(&cli.command),
        args: canon,
    };
    let env = Env { ctx, cache: cli.cache_dir.as_deref(), seed: cli.seed };
    let report = commands::run(&cli.command, &env)?;
    emitter.emit(report)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("digitlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
