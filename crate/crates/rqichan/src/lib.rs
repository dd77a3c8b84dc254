//! Command-line front end for the `rqichan-core` library: key-value
//! configuration, parallel grid evaluation and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod exec;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};

use clap::{Arg, ArgAction, ArgMatches};

use crate::config::{parse_key_values, Command, RunConfig, KEYS};
use crate::error::{CliError, CliResult};
use crate::exec::Executor;

fn cli() -> clap::Command {
    let commands: Vec<String> = Command::ALL.iter().map(|c| format!("  {:<10} {}", c.as_str(), c.about())).collect();
    let mut cmd = clap::Command::new("rqichan")
        .about("Channel capacities, fidelities and Fisher information for accelerated receivers")
        .after_help(format!(
            "Commands:\n{}\n\nEvery key can also be set in a `key = value` file passed with --config;\nflags override the file. Worker threads: RQICHAN_THREADS.\nExit codes: 0 ok, 1 usage, 2 not converged, 3 invariant violation.",
            commands.join("\n")
        ))
        .arg(Arg::new("command").value_name("COMMAND").help("capacity | fidelity | fisher | noon | sweep | optimize | verify"))
        .arg(Arg::new("config").long("config").value_name("FILE").help("key-value configuration file"));
    for (key, help) in KEYS {
        cmd = cmd.arg(Arg::new(*key).long(key.replace('_', "-")).value_name("VALUE").help(*help).action(ArgAction::Set));
    }
    cmd
}

fn flag_values(m: &ArgMatches) -> Vec<(String, String)> {
    KEYS.iter().filter_map(|(k, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone()))).collect()
}

/// Parse arguments into a [`RunConfig`].
pub fn parse_args<I: IntoIterator<Item = OsString>>(args: I) -> CliResult<RunConfig> {
    let m = cli().try_get_matches_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            let _ = e.print();
            CliError::Usage(String::new())
        }
        _ => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            CliError::Usage(first)
        }
    })?;
    let file = match m.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            parse_key_values(&text)?
        }
        None => Vec::new(),
    };
    RunConfig::from_sources(m.get_one::<String>("command").map(String::as_str), &file, &flag_values(&m))
}

/// Run the CLI on `args` and return the process exit code.
pub fn main_with<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let args: Vec<OsString> = args.into_iter().collect();
    let wants_help = args.iter().skip(1).any(|a| a == "--help" || a == "-h");
    match execute(args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) if msg.is_empty() && wants_help => 0,
        Err(e) => {
            eprintln!("rqichan: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: Vec<OsString>) -> CliResult<i32> {
    let cfg = parse_args(args)?;
    let exec = Executor::from_env()?;
    let report = commands::run(&cfg, &exec)?;
    match &cfg.output {
        Some(path) => {
            let mut buf = Vec::new();
            report.table.write(cfg.format, &mut buf)?;
            fs::write(path, buf)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.table.write(cfg.format, &mut lock)?;
            lock.flush()?;
        }
    }
    if report.exit_code != 0 {
        let why = match report.exit_code {
            1 => "some rows had invalid parameters",
            2 => "some values did not converge (see the converged column)",
            _ => "an invariant check failed",
        };
        eprintln!("rqichan: {why}");
    }
    Ok(report.exit_code)
}
