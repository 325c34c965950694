//! Command-line studies for the micro fuel cell system models: JSON
//! configuration, CSV export, and a run manifest.
//!
//! The binary exposes one subcommand per study:
//!
//! ```text
//! microcell <command> --config <path> [--out <dir>] [--set key=value ...]
//! ```
//!
//! Commands: `resistance`, `polarization`, `efficiency`, `simulate`, `duty`,
//! `energy`, `size`, `check`, `calibrate`. Exit codes: 0 success, 1
//! validation error, 2 infeasibility or non-convergence, 64 usage error.

// Validation predicates are written `!(x > 0.0)` so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

/// Parsed command line.
pub struct Invocation {
    pub command: String,
    pub config_path: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub overrides: Vec<(String, String)>,
}

pub const USAGE: &str = "usage: microcell <command> --config <path> [--out <dir>] [--set key=value ...]
commands:
  resistance    pitch sweep of the collector resistance components
  polarization  V/I curve family over series resistances
  efficiency    efficiency curves over leakage current densities
  simulate      transient load-profile simulation
  duty          duty-cycle efficiency table (DF and PCB cells)
  energy        obtainable energy vs discharge current
  size          fuel-cell area sizing for mean powers
  check         design-rule report
  calibrate     fit polarization parameters and write them back as a config";

const KNOWN_COMMANDS: &[&str] = &[
    "resistance",
    "polarization",
    "efficiency",
    "simulate",
    "duty",
    "energy",
    "size",
    "check",
    "calibrate",
];

/// Errors carrying their process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Validation(_) => 1,
            CliError::Infeasible(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

impl From<microcell_core::Error> for CliError {
    fn from(e: microcell_core::Error) -> Self {
        use microcell_core::Error::*;
        match e {
            InfeasibleLoad { .. }
            | InfeasiblePitch(_)
            | CalibrationFailed { .. }
            | CurrentOutOfRange { .. } => CliError::Infeasible(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// Parse the raw argument list (without the program name).
pub fn parse_args(args: &[String]) -> Result<Invocation, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage(USAGE.to_string()));
    };
    if !KNOWN_COMMANDS.contains(&command.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown command `{command}`\n{USAGE}"
        )));
    }
    let mut config_path = None;
    let mut out_dir = None;
    let mut overrides = Vec::new();
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                config_path = Some(PathBuf::from(it.next().ok_or_else(|| {
                    CliError::Usage(format!("--config needs a path\n{USAGE}"))
                })?));
            }
            "--out" => {
                out_dir = Some(PathBuf::from(it.next().ok_or_else(|| {
                    CliError::Usage(format!("--out needs a directory\n{USAGE}"))
                })?));
            }
            "--set" => {
                let kv = it
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("--set needs key=value\n{USAGE}")))?;
                let (k, v) = kv.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("--set expects key=value, got `{kv}`\n{USAGE}"))
                })?;
                overrides.push((k.to_string(), v.to_string()));
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unexpected argument `{other}`\n{USAGE}"
                )));
            }
        }
    }
    let config_path = config_path
        .ok_or_else(|| CliError::Usage(format!("--config is required\n{USAGE}")))?;
    Ok(Invocation {
        command: command.clone(),
        config_path,
        out_dir,
        overrides,
    })
}

/// Run a full invocation; returns the process exit code and prints errors to
/// stderr.
pub fn run(args: &[String]) -> i32 {
    let invocation = match parse_args(args) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match commands::execute(&invocation) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
