mod commands;
mod config;
mod parse;

use clap::error::ErrorKind;
use clap::Parser;
use commands::{CliError, Output};
use config::{Cli, RunConfig, SEED_ENV};
use serde::Serialize;
use serde_json::Value;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a std::collections::BTreeMap<String, String>,
    seed: u64,
    fingerprints: &'a Value,
    status: &'static str,
    flag: Option<&'a str>,
    wall_time_seconds: f64,
    payload: &'a Value,
}

fn write_outputs(cfg: &RunConfig, out: &Output, wall: f64) -> Result<(), String> {
    let dir = Path::new(cfg.get("out").unwrap_or("."));
    let name = cfg.get("name").unwrap_or(&cfg.command);
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let envelope = ReportEnvelope {
        tool: "riesz-lab",
        version: env!("CARGO_PKG_VERSION"),
        command: &cfg.command,
        config: &cfg.entries,
        seed: cfg.seed,
        fingerprints: &out.fingerprints,
        status: if out.flag.is_some() { "flagged" } else { "ok" },
        flag: out.flag.as_deref(),
        wall_time_seconds: wall,
        payload: &out.payload,
    };
    let json = riesz_lab::report::to_json_string(&envelope).map_err(|e| e.to_string())?;
    let json_path = dir.join(format!("{name}.json"));
    std::fs::write(&json_path, json).map_err(|e| format!("cannot write {}: {e}", json_path.display()))?;
    let csv_path = dir.join(format!("{name}.csv"));
    std::fs::write(&csv_path, &out.csv).map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_INPUT,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let (command, opts) = cli.command.parts();
    let cfg = match RunConfig::resolve(command, opts, std::env::var(SEED_ENV).ok()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let start = Instant::now();
    let out = match commands::run(&cfg) {
        Ok(out) => out,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let wall = start.elapsed().as_secs_f64();
    if let Err(msg) = write_outputs(&cfg, &out, wall) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    for line in &out.summary {
        println!("{line}");
    }
    match &out.flag {
        Some(flag) => {
            eprintln!("flag: {flag}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        None => ExitCode::SUCCESS,
    }
}
