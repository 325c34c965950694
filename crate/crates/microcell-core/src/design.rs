//! Design checks, pitch optimization, area sizing, and the generic sweep
//! engine.
//!
//! The scalar design rules collected here:
//!
//! - total series resistance below ~100 mΩ·cm² keeps ohmic power and
//!   efficiency losses in the one-percent region;
//! - oxygen under the collector ribs depletes below 1 % beyond ~25 µm from
//!   the channel without a GDL, and beyond ~400 µm with one, so the rib
//!   half-width is checked against those distances;
//! - collector fingers have material-dependent length limits (gold film
//!   ~1 cm, steel mesh ~2 cm, copper PCB ~5 cm);
//! - the channel pitch should stay below ~400 µm without a GDL and ~2 mm
//!   with one.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{CellGeometry, CellPreset, CollectorMaterial, CollectorSpec, LayerSpec};
use crate::hydrogen::GalvanicCellSpec;
use crate::numeric::powf;
use crate::polarization::{max_efficiency_point, peak_power_density, PolarizationParams};
use crate::resistance::{
    contact_resistance, in_plane_resistance, resistance_sweep, series_resistance,
    side_resistance, through_plane_resistance, ResistanceBreakdown, Side,
};
use crate::system::{duty_cycle_table, obtainable_energy, CircuitSpec, FuelCellModel};
use crate::units;

/// Scalar design limits. SI internally; defaults carry the published
/// guidance values.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DesignConstraints {
    /// Budget for the whole-cell series resistance [Ω·m²].
    pub max_series_resistance: f64,
    /// Oxygen depletion distance without a GDL [m].
    pub max_depletion_distance_no_gdl: f64,
    /// Oxygen depletion distance with a GDL [m].
    pub max_depletion_distance_gdl: f64,
    /// Collector length limits per material [m]: gold film, copper PCB,
    /// steel mesh. `Custom` collectors fall back to their own hint.
    pub gold_film_max_length: f64,
    pub copper_pcb_max_length: f64,
    pub steel_mesh_max_length: f64,
    /// Pitch guidance [m], reported at warning severity.
    pub pitch_guidance_no_gdl: f64,
    pub pitch_guidance_gdl: f64,
    /// Explicit in-plane resistance budget for [`optimize_pitch`] [Ω·m²].
    /// `None` selects the default rule (parity with the pitch-independent
    /// floor `R_t + R_c` of the same stack).
    pub in_plane_budget: Option<f64>,
}

impl Default for DesignConstraints {
    fn default() -> Self {
        DesignConstraints {
            max_series_resistance: units::mohm_cm2_to_ohm_m2(100.0),
            max_depletion_distance_no_gdl: units::um_to_m(25.0),
            max_depletion_distance_gdl: units::um_to_m(400.0),
            gold_film_max_length: units::cm_to_m(1.0),
            copper_pcb_max_length: units::cm_to_m(5.0),
            steel_mesh_max_length: units::cm_to_m(2.0),
            pitch_guidance_no_gdl: units::um_to_m(400.0),
            pitch_guidance_gdl: units::um_to_m(2000.0),
            in_plane_budget: None,
        }
    }
}

impl DesignConstraints {
    pub fn validate(&self) -> Result<()> {
        let limits = [
            self.max_series_resistance,
            self.max_depletion_distance_no_gdl,
            self.max_depletion_distance_gdl,
            self.gold_film_max_length,
            self.copper_pcb_max_length,
            self.steel_mesh_max_length,
            self.pitch_guidance_no_gdl,
            self.pitch_guidance_gdl,
        ];
        if limits.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::invalid("design limits must be positive"));
        }
        Ok(())
    }

    fn length_limit(&self, collector: &CollectorSpec) -> f64 {
        match collector.material {
            CollectorMaterial::GoldFilm => self.gold_film_max_length,
            CollectorMaterial::CopperPcb => self.copper_pcb_max_length,
            CollectorMaterial::SteelMesh => self.steel_mesh_max_length,
            CollectorMaterial::Custom => collector.max_length_hint,
        }
    }

    fn depletion_distance(&self, has_gdl: bool) -> f64 {
        if has_gdl {
            self.max_depletion_distance_gdl
        } else {
            self.max_depletion_distance_no_gdl
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        }
    }
}

/// One violated design rule. `measured` and `limit` are in the practical
/// unit named by the constraint id.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub constraint_id: String,
    pub measured: f64,
    pub limit: f64,
    pub severity: Severity,
}

/// Result of a design check: the violations found, and a pass flag that is
/// true exactly when no error-severity violation exists.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DesignReport {
    pub violations: Vec<Violation>,
    pub pass_flag: bool,
}

impl DesignReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        let pass_flag = !violations.iter().any(|v| v.severity == Severity::Error);
        DesignReport {
            violations,
            pass_flag,
        }
    }

    /// Render as `SEVERITY constraint_id measured limit` lines.
    pub fn render_lines(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| {
                format!(
                    "{} {} {:.6} {:.6}",
                    v.severity.as_str(),
                    v.constraint_id,
                    v.measured,
                    v.limit
                )
            })
            .collect()
    }
}

/// Evaluate every design rule for a symmetric cell (both electrode sides
/// built from the same stack and collector).
///
/// Severities: the resistance budget and collector length are errors; the
/// depletion distance and pitch guidance are warnings (performance
/// guidance — the published cells themselves exceed the no-GDL depletion
/// distance at every fabricated pitch).
pub fn check_design(
    geometry: &CellGeometry,
    stack: &[LayerSpec],
    collector: &CollectorSpec,
    constraints: &DesignConstraints,
) -> Result<DesignReport> {
    geometry.validate()?;
    constraints.validate()?;
    let mut violations = Vec::new();

    let total = series_resistance(geometry, stack, stack, collector, collector)?;
    if total.r_total > constraints.max_series_resistance {
        violations.push(Violation {
            constraint_id: String::from("series-resistance-mohm-cm2"),
            measured: units::ohm_m2_to_mohm_cm2(total.r_total),
            limit: units::ohm_m2_to_mohm_cm2(constraints.max_series_resistance),
            severity: Severity::Error,
        });
    }

    let rib_half = 0.5 * geometry.rib_width();
    let depletion = constraints.depletion_distance(geometry.has_gdl);
    if rib_half > depletion {
        violations.push(Violation {
            constraint_id: String::from("oxygen-depletion-rib-half-width-um"),
            measured: units::m_to_um(rib_half),
            limit: units::m_to_um(depletion),
            severity: Severity::Warning,
        });
    }

    let length_limit = constraints.length_limit(collector);
    if geometry.finger_length > length_limit {
        violations.push(Violation {
            constraint_id: format!("collector-length-{}-cm", collector.material.as_str()),
            measured: units::m_to_cm(geometry.finger_length),
            limit: units::m_to_cm(length_limit),
            severity: Severity::Error,
        });
    }

    let pitch_guidance = if geometry.has_gdl {
        constraints.pitch_guidance_gdl
    } else {
        constraints.pitch_guidance_no_gdl
    };
    if geometry.pitch > pitch_guidance {
        violations.push(Violation {
            constraint_id: String::from("pitch-guidance-um"),
            measured: units::m_to_um(geometry.pitch),
            limit: units::m_to_um(pitch_guidance),
            severity: Severity::Warning,
        });
    }

    Ok(DesignReport::from_violations(violations))
}

const PITCH_GRID_POINTS: usize = 256;
const PITCH_GRID_MIN: f64 = 20e-6;
const PITCH_GRID_MAX: f64 = 5e-3;

/// Largest pitch on a 256-point logarithmic grid over [20 µm, 5 mm] whose
/// in-plane term stays within budget, at the given opening ratio.
///
/// The default budget is parity with the stack's own pitch-independent floor
/// `R_t + R_c`: the lateral term is "low" while it does not exceed the terms
/// no pitch choice can remove. For stacks with a GDL the rib half-width is
/// additionally capped by the oxygen depletion distance, which is the
/// binding guidance there (at 60 % opening it caps the pitch at exactly
/// 2 mm). Without a GDL the depletion distance is far tighter than any
/// published cell and stays a reported warning rather than an optimizer
/// constraint.
pub fn optimize_pitch(
    preset: &CellPreset,
    opening_ratio: f64,
    constraints: &DesignConstraints,
) -> Result<(f64, ResistanceBreakdown)> {
    if !(opening_ratio > 0.0 && opening_ratio < 1.0) {
        return Err(Error::invalid("opening ratio must lie in (0, 1)"));
    }
    constraints.validate()?;

    let geometry_at = |pitch: f64| -> CellGeometry {
        let mut g = preset.geometry.clone();
        g.pitch = pitch;
        g.channel_width = opening_ratio * pitch;
        g
    };

    let budget = match constraints.in_plane_budget {
        Some(b) => b,
        None => {
            let g = geometry_at(1e-3);
            through_plane_resistance(&g, &preset.stack)?
                + contact_resistance(&g, &preset.collector)?
        }
    };

    let depletion_cap = if preset.geometry.has_gdl {
        // (p − w)/2 <= distance  =>  p <= 2·distance/(1 − phi)
        Some(2.0 * constraints.max_depletion_distance_gdl / (1.0 - opening_ratio))
    } else {
        None
    };

    let ratio = PITCH_GRID_MAX / PITCH_GRID_MIN;
    let mut best: Option<f64> = None;
    for k in 0..PITCH_GRID_POINTS {
        let f = k as f64 / (PITCH_GRID_POINTS - 1) as f64;
        let pitch = PITCH_GRID_MIN * powf(ratio, f);
        if let Some(cap) = depletion_cap {
            if pitch > cap {
                break;
            }
        }
        let g = geometry_at(pitch);
        let r_i = in_plane_resistance(&g, &preset.stack)?;
        if r_i <= budget {
            best = Some(pitch);
        }
    }

    match best {
        Some(pitch) => {
            let g = geometry_at(pitch);
            let breakdown = side_resistance(&g, &preset.stack, &preset.collector, Side::Cathode)?;
            Ok((pitch, breakdown))
        }
        None => Err(Error::InfeasiblePitch(format!(
            "no pitch in [{} µm, {} µm] keeps the in-plane term under {:.3} mΩ·cm²",
            units::m_to_um(PITCH_GRID_MIN),
            units::m_to_um(PITCH_GRID_MAX),
            units::ohm_m2_to_mohm_cm2(budget)
        ))),
    }
}

const SIZING_GRID: usize = 10_000;

/// Fuel-cell area [m²] sized so a given mean power runs at the power density
/// of the efficiency maximum (grid argmax over 10⁴ points, first maximum on
/// ties).
pub fn size_fuel_cell_area(mean_power: f64, params: &PolarizationParams) -> Result<f64> {
    if mean_power < 0.0 {
        return Err(Error::invalid("mean power must be non-negative"));
    }
    if mean_power == 0.0 {
        return Ok(0.0);
    }
    let best = max_efficiency_point(params, 0.0, SIZING_GRID)?;
    let p_opt = best.efficiency.operating_power_density;
    if !(p_opt > 0.0) {
        return Err(Error::invalid("curve has no positive-power operating point"));
    }
    Ok(mean_power / p_opt)
}

/// Variables the generic sweep engine understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SweepVariable {
    Pitch,
    OpeningRatio,
    SeriesResistance,
    LeakageCurrent,
    LoadCurrent,
    Duty,
}

impl SweepVariable {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "pitch" => Ok(SweepVariable::Pitch),
            "opening_ratio" => Ok(SweepVariable::OpeningRatio),
            "r_s" => Ok(SweepVariable::SeriesResistance),
            "i_leak" => Ok(SweepVariable::LeakageCurrent),
            "load_current" => Ok(SweepVariable::LoadCurrent),
            "duty" => Ok(SweepVariable::Duty),
            other => Err(Error::UnknownVariable(String::from(other))),
        }
    }
}

/// Everything the sweep evaluators may need.
pub struct SweepContext<'a> {
    pub preset: &'a CellPreset,
    pub opening_ratio: f64,
    pub params: &'a PolarizationParams,
    /// Cell used for load-current sweeps and as the first duty column.
    pub cell: &'a FuelCellModel,
    /// Second duty column.
    pub second_cell: &'a FuelCellModel,
    pub gas: &'a GalvanicCellSpec,
    pub circuit: &'a CircuitSpec,
    pub pulse_power: f64,
    pub pulse_width: f64,
}

/// A sweep result: a header (swept variable first) and one row per grid
/// point, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Dispatch one sweep over its owning module's evaluator. Grid points are
/// independent; rows come back in grid order.
pub fn parameter_sweep(
    variable: SweepVariable,
    grid: &[f64],
    ctx: &SweepContext<'_>,
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    match variable {
        SweepVariable::Pitch => {
            let rows = resistance_sweep(ctx.preset, grid, ctx.opening_ratio)?;
            Ok(SweepTable {
                header: vec![
                    String::from("pitch_um"),
                    String::from("R_i"),
                    String::from("R_t"),
                    String::from("R_c"),
                    String::from("R_m"),
                    String::from("R_s"),
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.pitch_um,
                            r.r_in_plane,
                            r.r_through_plane,
                            r.r_contact,
                            r.r_metal,
                            r.r_total,
                        ]
                    })
                    .collect(),
            })
        }
        SweepVariable::OpeningRatio => {
            let mut rows = Vec::with_capacity(grid.len());
            for &phi in grid {
                if !(phi > 0.0 && phi < 1.0) {
                    return Err(Error::invalid("opening ratios must lie in (0, 1)"));
                }
                let mut g = ctx.preset.geometry.clone();
                g.channel_width = phi * g.pitch;
                let b = side_resistance(&g, &ctx.preset.stack, &ctx.preset.collector, Side::Cathode)?;
                rows.push(vec![
                    phi,
                    units::ohm_m2_to_mohm_cm2(b.r_in_plane),
                    units::ohm_m2_to_mohm_cm2(b.r_through_plane),
                    units::ohm_m2_to_mohm_cm2(b.r_contact),
                    units::ohm_m2_to_mohm_cm2(b.r_metal),
                    units::ohm_m2_to_mohm_cm2(b.r_total),
                ]);
            }
            Ok(SweepTable {
                header: vec![
                    String::from("opening_ratio"),
                    String::from("R_i"),
                    String::from("R_t"),
                    String::from("R_c"),
                    String::from("R_m"),
                    String::from("R_s"),
                ],
                rows,
            })
        }
        SweepVariable::SeriesResistance => {
            let mut rows = Vec::with_capacity(grid.len());
            for &r_s_prac in grid {
                let r_s = units::mohm_cm2_to_ohm_m2(r_s_prac);
                let best = max_efficiency_point(ctx.params, r_s, SIZING_GRID)?;
                let peak = peak_power_density(ctx.params, r_s, SIZING_GRID)?;
                rows.push(vec![
                    r_s_prac,
                    best.efficiency.total,
                    units::w_m2_to_mw_cm2(best.efficiency.operating_power_density),
                    units::w_m2_to_mw_cm2(peak),
                ]);
            }
            Ok(SweepTable {
                header: vec![
                    String::from("r_s_mohmcm2"),
                    String::from("eta_max"),
                    String::from("p_at_eta_max_mW_cm2"),
                    String::from("peak_power_mW_cm2"),
                ],
                rows,
            })
        }
        SweepVariable::LeakageCurrent => {
            let mut rows = Vec::with_capacity(grid.len());
            for &leak in grid {
                if leak < 0.0 {
                    return Err(Error::invalid("leakage must be non-negative"));
                }
                let mut p = *ctx.params;
                p.leakage_current_density = units::ma_cm2_to_a_m2(leak);
                let best = max_efficiency_point(&p, 0.0, SIZING_GRID)?;
                rows.push(vec![
                    leak,
                    best.efficiency.total,
                    units::a_m2_to_ma_cm2(best.current_density),
                ]);
            }
            Ok(SweepTable {
                header: vec![
                    String::from("i_leak_mA_cm2"),
                    String::from("eta_max"),
                    String::from("i_at_eta_max_mA_cm2"),
                ],
                rows,
            })
        }
        SweepVariable::LoadCurrent => {
            let amps: Vec<f64> = grid.iter().map(|ma| ma * 1e-3).collect();
            let rows = obtainable_energy(ctx.cell, ctx.gas, ctx.circuit, &amps)?;
            Ok(SweepTable {
                header: vec![
                    String::from("current_mA"),
                    String::from("energy_full_system_J"),
                    String::from("energy_fc_only_J"),
                    String::from("eta_system"),
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.current * 1e3,
                            r.energy_full_system,
                            r.energy_fc_only,
                            r.eta_system,
                        ]
                    })
                    .collect(),
            })
        }
        SweepVariable::Duty => {
            let rows = duty_cycle_table(
                ctx.cell,
                ctx.second_cell,
                ctx.gas,
                ctx.circuit,
                ctx.pulse_power,
                ctx.pulse_width,
                grid,
            )?;
            Ok(SweepTable {
                header: vec![
                    String::from("duty"),
                    String::from("interval_s"),
                    String::from("mean_power_mW"),
                    String::from("eta_df"),
                    String::from("eta_pcb"),
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.duty,
                            r.interval,
                            r.mean_power * 1e3,
                            r.eta_df,
                            r.eta_pcb,
                        ]
                    })
                    .collect(),
            })
        }
    }
}
