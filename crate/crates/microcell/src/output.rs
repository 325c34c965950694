//! CSV, summary, and manifest writers. Every writer formats floats through
//! one helper so reruns of the same build produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use microcell_core::system::SimulationSummary;

use crate::CliError;

/// Shortest round-trip decimal representation; stable for a given binary.
pub fn fmt(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value}")
    }
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn write_lines(path: &Path, lines: &[String]) -> Result<(), CliError> {
    let mut text = lines.join("\n");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Flat `key value` block of a simulation summary, plus a JSON twin for
/// machines.
pub fn write_summary(dir: &Path, summary: &SimulationSummary) -> Result<(), CliError> {
    let pairs = [
        ("delivered_energy_J", summary.delivered_energy),
        ("fuel_cell_energy_J", summary.fuel_cell_energy),
        ("h2_generated_mol", summary.h2_generated),
        ("h2_consumed_mol", summary.h2_consumed_by_reaction),
        ("h2_lost_mol", summary.h2_lost_to_leakage),
        ("plenum_delta_mol", summary.plenum_delta),
        ("eta_system", summary.eta_system),
        ("eta_voltage_mean", summary.eta_voltage_mean),
        ("eta_faraday_mean", summary.eta_faraday_mean),
        ("eta_fuel_cell", summary.eta_fuel_cell()),
        ("starvation_time_s", summary.starvation_time),
        ("gas_cell_charge_used_C", summary.gas_cell_charge_used),
        ("elapsed_s", summary.elapsed),
    ];
    let lines: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("{k} {}", fmt(*v)))
        .collect();
    write_lines(&dir.join("summary.txt"), &lines)?;

    let json = serde_json::to_string_pretty(summary)
        .map_err(|e| CliError::Validation(format!("summary serialization failed: {e}")))?;
    fs::write(dir.join("summary.json"), json + "\n")?;
    Ok(())
}

/// 64-bit FNV-1a over the canonicalized config text.
pub fn config_hash(canonical: &str) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}

/// `manifest.txt`: command, config hash, and component versions.
pub fn write_manifest(dir: &Path, command: &str, canonical_config: &str) -> Result<(), CliError> {
    let lines = vec![
        format!("command {command}"),
        format!("config_hash {}", config_hash(canonical_config)),
        format!("microcell_version {}", env!("CARGO_PKG_VERSION")),
        format!("core_version {}", microcell_core_version()),
    ];
    write_lines(&dir.join("manifest.txt"), &lines)
}

fn microcell_core_version() -> &'static str {
    // The workspace pins both crates to one version.
    env!("CARGO_PKG_VERSION")
}

/// Create the output directory (default `out/` next to the working
/// directory) and return it.
pub fn prepare_out_dir(
    cli_out: Option<&Path>,
    config_out: Option<&str>,
) -> Result<PathBuf, CliError> {
    let dir = cli_out
        .map(Path::to_path_buf)
        .or_else(|| config_out.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Write a text report to stdout as well as a file.
pub fn emit(path: &Path, lines: &[String]) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    for line in lines {
        let _ = writeln!(handle, "{line}");
    }
    write_lines(path, lines)
}
