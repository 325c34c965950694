//! One function per CLI command.

use std::path::Path;

use microcell_core::design::{check_design, size_fuel_cell_area};
use microcell_core::polarization::{
    calibrate, curve_family, efficiency_vs_leakage, PolarizationParams,
};
use microcell_core::resistance::resistance_sweep;
use microcell_core::system::{duty_cycle_table, obtainable_energy, simulate, FuelCellModel};
use microcell_core::units;

use crate::config::{ParamsConfig, PolarizationConfig, RunConfig};
use crate::output;
use crate::{CliError, Invocation};

pub fn execute(invocation: &Invocation) -> Result<(), CliError> {
    let (config, canonical) = RunConfig::load(&invocation.config_path, &invocation.overrides)?;
    let out_dir = output::prepare_out_dir(
        invocation.out_dir.as_deref(),
        config.output_dir.as_deref(),
    )?;
    match invocation.command.as_str() {
        "resistance" => cmd_resistance(&config, &out_dir)?,
        "polarization" => cmd_polarization(&config, &out_dir)?,
        "efficiency" => cmd_efficiency(&config, &out_dir)?,
        "simulate" => cmd_simulate(&config, &out_dir)?,
        "duty" => cmd_duty(&config, &out_dir)?,
        "energy" => cmd_energy(&config, &out_dir)?,
        "size" => cmd_size(&config, &out_dir)?,
        "check" => cmd_check(&config, &out_dir)?,
        "calibrate" => cmd_calibrate(&config, &out_dir)?,
        other => return Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
    output::write_manifest(&out_dir, &invocation.command, &canonical)
}

fn study_missing(section: &str) -> CliError {
    CliError::Validation(format!("config is missing the `study.{section}` section"))
}

fn preset_params(name: &str) -> Result<PolarizationParams, CliError> {
    match name {
        "default" => Ok(PolarizationParams::calibrated_default()),
        "df" => Ok(PolarizationParams::calibrated_df()),
        "pcb" => Ok(PolarizationParams::calibrated_pcb()),
        other => Err(CliError::Validation(format!(
            "unknown polarization preset `{other}` (default, df, pcb)"
        ))),
    }
}

fn cmd_resistance(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .resistance
        .as_ref()
        .ok_or_else(|| study_missing("resistance"))?;
    let preset = config.cell_preset()?;
    let pitches = study.pitch_um.expand()?;
    let rows = resistance_sweep(&preset, &pitches, study.opening_ratio)?;
    output::write_csv(
        &out_dir.join("resistance.csv"),
        &["pitch_um", "R_i", "R_t", "R_c", "R_m", "R_s"],
        rows.iter().map(|r| {
            vec![
                r.pitch_um,
                r.r_in_plane,
                r.r_through_plane,
                r.r_contact,
                r.r_metal,
                r.r_total,
            ]
        }),
    )
}

fn cmd_polarization(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .polarization
        .as_ref()
        .ok_or_else(|| study_missing("polarization"))?;
    let params = config.polarization_params()?;
    let grid = study.i_grid_ma_cm2.expand()?;
    let rows = curve_family(&params, &study.r_s_list_mohm_cm2, &grid)?;
    output::write_csv(
        &out_dir.join("polarization.csv"),
        &["r_s_mohmcm2", "i_mA_cm2", "V", "P_mW_cm2", "eta", "rel_power_loss"],
        rows.iter().map(|r| {
            vec![
                r.r_s_mohm_cm2,
                r.i_ma_cm2,
                r.v,
                r.p_mw_cm2,
                r.eta,
                r.rel_power_loss,
            ]
        }),
    )
}

fn cmd_efficiency(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .efficiency
        .as_ref()
        .ok_or_else(|| study_missing("efficiency"))?;
    let params = config.polarization_params()?;
    let grid = study.i_grid_ma_cm2.expand()?;
    let rows = efficiency_vs_leakage(&params, &study.leak_list_ma_cm2, &grid)?;
    output::write_csv(
        &out_dir.join("efficiency.csv"),
        &["i_leak_mA_cm2", "i_mA_cm2", "eta"],
        rows.iter().map(|r| vec![r.i_leak_ma_cm2, r.i_ma_cm2, r.eta]),
    )
}

fn cmd_simulate(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .simulate
        .as_ref()
        .ok_or_else(|| study_missing("simulate"))?;
    let params = config.polarization_params()?;
    let fc = FuelCellModel::new(params, study.area_cm2, study.r_s_mohm_cm2)?;
    let gas = config.gas_spec()?;
    let circuit = config.circuit_spec(Some(&fc))?;
    let profile = study.to_profile()?;
    let initial = study.initial_plenum(&circuit)?;
    let out = simulate(&fc, &gas, &circuit, &profile, study.dt_s, initial)?;
    output::write_csv(
        &out_dir.join("timeseries.csv"),
        &[
            "t_s", "i_fc_A", "v_fc_V", "i_gc_A", "v_gc_V", "i_diode_A", "i_bypass_A",
            "p_plenum_Pa", "h2_mol",
        ],
        out.series.iter().map(|p| {
            vec![
                p.t, p.i_fc, p.v_fc, p.i_gc, p.v_gc, p.i_diode, p.i_bypass, p.p_plenum, p.h2_mol,
            ]
        }),
    )?;
    output::write_summary(out_dir, &out.summary)
}

fn cmd_duty(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .duty
        .as_ref()
        .ok_or_else(|| study_missing("duty"))?;
    let df = FuelCellModel::new(
        preset_params(&study.df.polarization_preset)?,
        study.df.area_cm2,
        study.df.r_s_mohm_cm2,
    )?;
    let pcb = FuelCellModel::new(
        preset_params(&study.pcb.polarization_preset)?,
        study.pcb.area_cm2,
        study.pcb.r_s_mohm_cm2,
    )?;
    let gas = config.gas_spec()?;
    // The bleed resistor is sized against the small cell when requested.
    let circuit = config.circuit_spec(Some(&df))?;
    let rows = duty_cycle_table(
        &df,
        &pcb,
        &gas,
        &circuit,
        study.pulse_power_mw * 1e-3,
        study.pulse_width_ms * 1e-3,
        &study.duties,
    )?;
    output::write_csv(
        &out_dir.join("duty.csv"),
        &["duty", "interval_s", "mean_power_mW", "eta_df", "eta_pcb"],
        rows.iter().map(|r| {
            vec![r.duty, r.interval, r.mean_power * 1e3, r.eta_df, r.eta_pcb]
        }),
    )
}

fn cmd_energy(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .energy
        .as_ref()
        .ok_or_else(|| study_missing("energy"))?;
    let params = config.polarization_params()?;
    let fc = FuelCellModel::new(params, study.area_cm2, study.r_s_mohm_cm2)?;
    let gas = config.gas_spec()?;
    let circuit = config.circuit_spec(Some(&fc))?;
    let currents: Vec<f64> = study.currents_ma.iter().map(|ma| ma * 1e-3).collect();
    let rows = obtainable_energy(&fc, &gas, &circuit, &currents)?;
    output::write_csv(
        &out_dir.join("energy.csv"),
        &["current_mA", "energy_full_system_J", "energy_fc_only_J", "eta_system"],
        rows.iter().map(|r| {
            vec![
                r.current * 1e3,
                r.energy_full_system,
                r.energy_fc_only,
                r.eta_system,
            ]
        }),
    )
}

fn cmd_size(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let study = config
        .study
        .size
        .as_ref()
        .ok_or_else(|| study_missing("size"))?;
    let params = config.polarization_params()?;
    let mut rows = Vec::with_capacity(study.mean_power_mw.len());
    for &mw in &study.mean_power_mw {
        let area = size_fuel_cell_area(mw * 1e-3, &params)?;
        rows.push(vec![mw, area * 1e6]);
    }
    output::write_csv(&out_dir.join("size.csv"), &["mean_power_mW", "area_mm2"], rows)
}

fn cmd_check(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let preset = config.cell_preset()?;
    let constraints = config.constraints();
    let report = check_design(&preset.geometry, &preset.stack, &preset.collector, &constraints)?;
    let mut lines = report.render_lines();
    if lines.is_empty() {
        lines.push("PASS no violations".to_string());
    } else {
        lines.push(format!(
            "{} pass_flag {}",
            if report.pass_flag { "PASS" } else { "FAIL" },
            report.pass_flag
        ));
    }
    output::emit(&out_dir.join("report.txt"), &lines)
}

fn cmd_calibrate(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let targets = config
        .polarization
        .calibration_targets
        .as_ref()
        .ok_or_else(|| {
            CliError::Validation(
                "config is missing `polarization.calibration_targets`".to_string(),
            )
        })?
        .to_targets();
    let cal = calibrate(&targets)?;
    // Write the fitted parameters back as a directly runnable config.
    let mut calibrated = config.clone();
    calibrated.polarization = PolarizationConfig {
        preset: None,
        params: Some(ParamsConfig::from_params(&cal.params)),
        calibration_targets: config.polarization.calibration_targets.clone(),
    };
    let json = serde_json::to_string_pretty(&calibrated)
        .map_err(|e| CliError::Validation(format!("config serialization failed: {e}")))?;
    std::fs::write(out_dir.join("calibrated_config.json"), json + "\n")?;
    let lines = vec![
        format!("residual {}", output::fmt(cal.residual)),
        format!("iterations {}", cal.iterations),
        format!(
            "leakage_ma_cm2 {}",
            output::fmt(units::a_m2_to_ma_cm2(cal.params.leakage_current_density))
        ),
    ];
    output::write_lines(&out_dir.join("calibration.txt"), &lines)
}
