//! Command-line front end for `sl2act-core`.

pub mod args;
pub mod commands;
pub mod emit;
pub mod error;
pub mod table_dump;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{CommandFactory, FromArgMatches};
use sl2act_core::canonical_generators;

pub use args::RunConfig;
pub use commands::{execute, Outcome};
pub use error::{exit, CliError};

/// Package version followed by the built-in generator matrices.
pub fn version_string() -> String {
    let g = canonical_generators();
    format!(
        "{} (x={} y={} a={} b={} c={})",
        env!("CARGO_PKG_VERSION"),
        g.x,
        g.y,
        g.a,
        g.b,
        g.c
    )
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let version: &'static str = Box::leak(version_string().into_boxed_str());
    let matches = RunConfig::command().version(version).try_get_matches_from(argv)?;
    RunConfig::from_arg_matches(&matches)
}

/// Runs the CLI and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    if let Some(n) = cfg.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return exit::USAGE;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cfg).and_then(|o| write_outcome(&cfg, o)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_outcome(cfg: &RunConfig, outcome: Outcome) -> Result<i32, CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, &outcome.body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    if let Some(note) = outcome.note {
        eprintln!("{note}");
    }
    Ok(outcome.exit)
}
