mod args;
mod commands;
mod data;
mod output;

use std::process::ExitCode;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::Parser;

use args::{BenchCommand, Cli, Command, DictCommand, SeriesCommand};
use commands::{bench, compare, dict, import, series, text};
use output::Run;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    let out = cli.out.clone();
    let new = |name: &str, params: &dyn erased::Params| Run::new(name, &params.value(), seed, out.clone());
    match &cli.command {
        Command::Dict(DictCommand::Validate(a)) => dict::validate_cmd(new("dict validate", a), a),
        Command::Dict(DictCommand::Lens(a)) => dict::lens_cmd(new("dict lens", a), a),
        Command::Dict(DictCommand::Mask(a)) => dict::mask_cmd(new("dict mask", a), a),
        Command::Tokenize(a) => text::tokenize_cmd(new("tokenize", a), a),
        Command::Coverage(a) => text::coverage_cmd(new("coverage", a), a),
        Command::Score(a) => text::score_cmd(new("score", a), a),
        Command::Shift(a) => text::shift_cmd(new("shift", a), a),
        Command::Compare(a) => compare::compare_cmd(new("compare", a), a),
        Command::CompareGrid(a) => compare::grid_cmd(new("compare-grid", a), a),
        Command::Bench(BenchCommand::Reviews(a)) => bench::reviews_cmd(new("bench reviews", a), a, seed),
        Command::Bench(BenchCommand::Nb(a)) => bench::nb_cmd(new("bench nb", a), a, seed),
        Command::Bench(BenchCommand::Sweep(a)) => bench::sweep_cmd(new("bench sweep", a), a, seed),
        Command::Bench(BenchCommand::Calibrate(a)) => bench::calibrate_cmd(new("bench calibrate", a), a, seed),
        Command::Series(a) => match &a.correlate {
            Some(SeriesCommand::Correlate(c)) => series::correlate_cmd(new("series correlate", c), c),
            None => series::series_cmd(new("series", a), a),
        },
        Command::Import(a) => import::import_cmd(new("import", a), a),
    }
}

mod erased {
    use serde::Serialize;

    /// Object-safe wrapper so every argument struct can feed the manifest.
    pub trait Params {
        fn value(&self) -> serde_json::Value;
    }

    impl<T: Serialize> Params for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
        }
    }
}

/// Bad arguments discovered after parsing count as usage errors.
fn exit_code(e: &anyhow::Error) -> u8 {
    let usage = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<hedono::Error>(),
            Some(hedono::Error::InvalidArgument(_) | hedono::Error::InvalidScale(_))
        )
    });
    if usage {
        EXIT_USAGE
    } else {
        EXIT_DATA
    }
}

/// The cause chain on one line, skipping causes already spelled out by
/// the message above them.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut last = String::new();
    for c in e.chain() {
        let msg = c.to_string();
        if !last.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
        last = msg;
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_DATA);
        }
    }

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
