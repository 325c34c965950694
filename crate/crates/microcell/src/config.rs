//! JSON run configuration. Field names carry their practical unit; values
//! convert into the SI core types on load.

use serde::{Deserialize, Serialize};
use std::path::Path;

use microcell_core::design::DesignConstraints;
use microcell_core::geometry::{
    preset_by_name, CellGeometry, CellPreset, CollectorMaterial, CollectorSpec, LayerSpec,
};
use microcell_core::hydrogen::GalvanicCellSpec;
use microcell_core::polarization::{CalibrationTargets, PolarizationParams};
use microcell_core::system::{
    CircuitSpec, FuelCellModel, LoadMode, LoadProfile, LoadSegment, PlenumState,
};
use microcell_core::units;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cell: CellConfig,
    #[serde(default)]
    pub polarization: PolarizationConfig,
    #[serde(default)]
    pub gas_cell: GasCellConfig,
    #[serde(default)]
    pub circuit: CircuitConfig,
    #[serde(default)]
    pub constraints: Option<ConstraintsConfig>,
    #[serde(default)]
    pub study: StudyConfig,
    #[serde(default)]
    pub output_dir: Option<String>,
}

/// Exactly one of `preset` or `geometry` must be present; an explicit
/// geometry brings its own stack and collector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack: Option<Vec<LayerConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collector: Option<CollectorConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub active_area_cm2: f64,
    pub pitch_um: f64,
    pub channel_width_um: f64,
    pub finger_length_cm: f64,
    pub has_gdl: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub in_plane_resistivity_mohm_cm: f64,
    pub through_plane_resistivity_mohm_cm: f64,
    pub thickness_um: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectorConfig {
    pub metal_resistivity_uohm_cm: f64,
    pub metal_thickness_um: f64,
    pub contact_resistivity_mohm_cm2: f64,
    pub material: String,
    pub max_length_hint_cm: f64,
}

/// Either a named calibrated preset, explicit curve parameters, or targets
/// for a fresh calibration.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PolarizationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_targets: Option<TargetsConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub open_circuit_voltage_v: f64,
    pub tafel_slope_v: f64,
    pub exchange_current_density_ma_cm2: f64,
    pub area_resistance_mohm_cm2: f64,
    pub mass_transport_m_v: f64,
    pub mass_transport_n_cm2_ma: f64,
    pub leakage_current_density_ma_cm2: f64,
    pub limiting_current_density_ma_cm2: f64,
}

/// Practical-unit value whose conversion back to SI reproduces `si`
/// bit-exactly; the nearest decimal conversion can land one ulp off, so the
/// neighborhood is searched.
fn practical_exact(
    si: f64,
    to_practical: impl Fn(f64) -> f64,
    to_si: impl Fn(f64) -> f64,
) -> f64 {
    let nearest = to_practical(si);
    let mut candidate = nearest;
    for _ in 0..4 {
        if to_si(candidate) == si {
            return candidate;
        }
        candidate = candidate.next_up();
    }
    let mut candidate = nearest;
    for _ in 0..4 {
        if to_si(candidate) == si {
            return candidate;
        }
        candidate = candidate.next_down();
    }
    nearest
}

impl ParamsConfig {
    pub fn from_params(p: &PolarizationParams) -> Self {
        ParamsConfig {
            open_circuit_voltage_v: p.open_circuit_voltage,
            tafel_slope_v: p.tafel_slope,
            exchange_current_density_ma_cm2: practical_exact(
                p.exchange_current_density,
                units::a_m2_to_ma_cm2,
                units::ma_cm2_to_a_m2,
            ),
            area_resistance_mohm_cm2: practical_exact(
                p.area_resistance,
                units::ohm_m2_to_mohm_cm2,
                units::mohm_cm2_to_ohm_m2,
            ),
            mass_transport_m_v: p.mass_transport_m,
            mass_transport_n_cm2_ma: practical_exact(
                p.mass_transport_n,
                |si| si * 10.0,
                |prac| prac / 10.0,
            ),
            leakage_current_density_ma_cm2: practical_exact(
                p.leakage_current_density,
                units::a_m2_to_ma_cm2,
                units::ma_cm2_to_a_m2,
            ),
            limiting_current_density_ma_cm2: practical_exact(
                p.limiting_current_density,
                units::a_m2_to_ma_cm2,
                units::ma_cm2_to_a_m2,
            ),
        }
    }

    pub fn to_params(&self) -> Result<PolarizationParams, CliError> {
        Ok(PolarizationParams::from_practical(
            self.open_circuit_voltage_v,
            self.tafel_slope_v,
            self.exchange_current_density_ma_cm2,
            self.area_resistance_mohm_cm2,
            self.mass_transport_m_v,
            self.mass_transport_n_cm2_ma,
            self.leakage_current_density_ma_cm2,
            self.limiting_current_density_ma_cm2,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsConfig {
    pub eta_max: f64,
    pub power_at_eta_max_mw_cm2: f64,
    pub peak_power_window_mw_cm2: (f64, f64),
    pub i_leak_ma_cm2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ocv_v: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    0.05
}

impl TargetsConfig {
    pub fn to_targets(&self) -> CalibrationTargets {
        CalibrationTargets {
            eta_max: self.eta_max,
            power_at_eta_max_mw_cm2: self.power_at_eta_max_mw_cm2,
            peak_power_window_mw_cm2: self.peak_power_window_mw_cm2,
            i_leak_ma_cm2: self.i_leak_ma_cm2,
            ocv: self.ocv_v,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasCellConfig {
    pub open_circuit_voltage_v: f64,
    pub internal_resistance_ohm: f64,
    pub capacity_mah: f64,
    pub volume_cm3: f64,
}

impl Default for GasCellConfig {
    fn default() -> Self {
        GasCellConfig {
            open_circuit_voltage_v: 0.4,
            internal_resistance_ohm: 8.0,
            capacity_mah: 600.0,
            volume_cm3: 3.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    /// Bleed resistor [Ω]; `null` = absent. Ignored when
    /// `size_bypass_for_leakage` is set.
    #[serde(default)]
    pub bypass_resistor_ohm: Option<f64>,
    /// Size the bleed resistor so its idle current equals the membrane
    /// leakage of the primary cell: `R_L = V_oc/I_leak − R_gc`.
    #[serde(default)]
    pub size_bypass_for_leakage: bool,
    pub diode_forward_drop_v: f64,
    pub plenum_volume_cm3: f64,
    pub plenum_temperature_k: f64,
    pub starvation_pressure_fraction: f64,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        CircuitConfig {
            bypass_resistor_ohm: None,
            size_bypass_for_leakage: false,
            diode_forward_drop_v: 0.3,
            plenum_volume_cm3: 0.1,
            plenum_temperature_k: 298.15,
            starvation_pressure_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstraintsConfig {
    pub max_series_resistance_mohm_cm2: f64,
    pub max_depletion_distance_no_gdl_um: f64,
    pub max_depletion_distance_gdl_um: f64,
    pub gold_film_max_length_cm: f64,
    pub copper_pcb_max_length_cm: f64,
    pub steel_mesh_max_length_cm: f64,
    pub pitch_guidance_no_gdl_um: f64,
    pub pitch_guidance_gdl_um: f64,
    pub in_plane_budget_mohm_cm2: Option<f64>,
}

impl Default for ConstraintsConfig {
    // The practical literals mirror `DesignConstraints::default()`; kept as
    // literals so a defaulted config converts to exactly the core defaults.
    fn default() -> Self {
        ConstraintsConfig {
            max_series_resistance_mohm_cm2: 100.0,
            max_depletion_distance_no_gdl_um: 25.0,
            max_depletion_distance_gdl_um: 400.0,
            gold_film_max_length_cm: 1.0,
            copper_pcb_max_length_cm: 5.0,
            steel_mesh_max_length_cm: 2.0,
            pitch_guidance_no_gdl_um: 400.0,
            pitch_guidance_gdl_um: 2000.0,
            in_plane_budget_mohm_cm2: None,
        }
    }
}

impl ConstraintsConfig {
    pub fn to_constraints(&self) -> DesignConstraints {
        DesignConstraints {
            max_series_resistance: units::mohm_cm2_to_ohm_m2(self.max_series_resistance_mohm_cm2),
            max_depletion_distance_no_gdl: units::um_to_m(self.max_depletion_distance_no_gdl_um),
            max_depletion_distance_gdl: units::um_to_m(self.max_depletion_distance_gdl_um),
            gold_film_max_length: units::cm_to_m(self.gold_film_max_length_cm),
            copper_pcb_max_length: units::cm_to_m(self.copper_pcb_max_length_cm),
            steel_mesh_max_length: units::cm_to_m(self.steel_mesh_max_length_cm),
            pitch_guidance_no_gdl: units::um_to_m(self.pitch_guidance_no_gdl_um),
            pitch_guidance_gdl: units::um_to_m(self.pitch_guidance_gdl_um),
            in_plane_budget: self.in_plane_budget_mohm_cm2.map(units::mohm_cm2_to_ohm_m2),
        }
    }
}

/// Study-specific inputs; only the section for the invoked command is read.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistance: Option<ResistanceStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<PolarizationStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<EfficiencyStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duty: Option<DutyStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyStudy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<SizeStudy>,
}

/// A numeric grid: either explicit values or a described range.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        points: usize,
        #[serde(default)]
        log: bool,
    },
}

impl Grid {
    pub fn expand(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Grid::Values(v) => Ok(v.clone()),
            Grid::Range {
                min,
                max,
                points,
                log,
            } => {
                if *points < 2 || !(max > min) {
                    return Err(CliError::Validation(
                        "grid ranges need points >= 2 and max > min".to_string(),
                    ));
                }
                if *log && !(min > &0.0) {
                    return Err(CliError::Validation(
                        "log grids need a positive minimum".to_string(),
                    ));
                }
                let n = *points;
                Ok((0..n)
                    .map(|k| {
                        let f = k as f64 / (n - 1) as f64;
                        if *log {
                            min * (max / min).powf(f)
                        } else {
                            min + (max - min) * f
                        }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResistanceStudy {
    pub pitch_um: Grid,
    pub opening_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationStudy {
    pub r_s_list_mohm_cm2: Vec<f64>,
    pub i_grid_ma_cm2: Grid,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyStudy {
    pub leak_list_ma_cm2: Vec<f64>,
    pub i_grid_ma_cm2: Grid,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub duration_s: f64,
    /// `constant-current` (A), `constant-power` (W), `constant-resistance`
    /// (Ω), or `open`.
    pub mode: String,
    #[serde(default)]
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateStudy {
    pub segments: Vec<SegmentConfig>,
    #[serde(default = "default_repeat")]
    pub repeat_count: u32,
    pub dt_s: f64,
    /// `ambient` or `empty`.
    #[serde(default = "default_plenum")]
    pub initial_plenum: String,
    /// Cell area for the simulated fuel cell [cm²].
    pub area_cm2: f64,
    #[serde(default)]
    pub r_s_mohm_cm2: f64,
}

fn default_repeat() -> u32 {
    1
}

fn default_plenum() -> String {
    "ambient".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DutyCellConfig {
    pub area_cm2: f64,
    pub polarization_preset: String,
    #[serde(default)]
    pub r_s_mohm_cm2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DutyStudy {
    pub pulse_power_mw: f64,
    pub pulse_width_ms: f64,
    pub duties: Vec<f64>,
    pub df: DutyCellConfig,
    pub pcb: DutyCellConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyStudy {
    pub currents_ma: Vec<f64>,
    pub area_cm2: f64,
    #[serde(default)]
    pub r_s_mohm_cm2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeStudy {
    pub mean_power_mw: Vec<f64>,
}

impl RunConfig {
    /// Load from a file and apply `--set` overrides (dotted paths into the
    /// JSON tree; values parse as JSON scalars, falling back to strings).
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<(Self, String), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config is not valid JSON: {e}")))?;
        for (key, raw) in overrides {
            apply_override(&mut value, key, raw)?;
        }
        let canonical = serde_json::to_string(&value)
            .map_err(|e| CliError::Validation(format!("config re-serialization failed: {e}")))?;
        let config: RunConfig = serde_json::from_value(value)
            .map_err(|e| CliError::Validation(format!("config schema error: {e}")))?;
        config.validate()?;
        Ok((config, canonical))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.cell.preset, &self.cell.geometry) {
            (Some(_), Some(_)) => Err(CliError::Validation(
                "cell: give either a preset or an explicit geometry, not both".to_string(),
            )),
            (None, None) => Err(CliError::Validation(
                "cell: a preset name or an explicit geometry is required".to_string(),
            )),
            (Some(name), None) => {
                if preset_by_name(name).is_none() {
                    Err(CliError::Validation(format!(
                        "cell: unknown preset `{name}` (DF, PCB, PG)"
                    )))
                } else {
                    Ok(())
                }
            }
            (None, Some(_)) => Ok(()),
        }
    }

    /// The cell as a preset bundle (geometry + stack + collector).
    pub fn cell_preset(&self) -> Result<CellPreset, CliError> {
        if let Some(name) = &self.cell.preset {
            return preset_by_name(name)
                .ok_or_else(|| CliError::Validation(format!("unknown preset `{name}`")));
        }
        let g = self.cell.geometry.as_ref().expect("validated");
        let geometry = CellGeometry::from_practical(
            g.active_area_cm2,
            g.pitch_um,
            g.channel_width_um,
            g.finger_length_cm,
            g.has_gdl,
        )?;
        let stack = match &self.cell.stack {
            Some(layers) => layers
                .iter()
                .map(|l| {
                    LayerSpec::from_practical(
                        l.in_plane_resistivity_mohm_cm,
                        l.through_plane_resistivity_mohm_cm,
                        l.thickness_um,
                    )
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => {
                let mut stack = vec![LayerSpec::catalyst()];
                if geometry.has_gdl {
                    stack.push(LayerSpec::gdl());
                }
                stack
            }
        };
        let collector = match &self.cell.collector {
            Some(c) => {
                let material = match c.material.as_str() {
                    "gold-film" => CollectorMaterial::GoldFilm,
                    "copper-pcb" => CollectorMaterial::CopperPcb,
                    "steel-mesh" => CollectorMaterial::SteelMesh,
                    "custom" => CollectorMaterial::Custom,
                    other => {
                        return Err(CliError::Validation(format!(
                            "unknown collector material `{other}`"
                        )))
                    }
                };
                CollectorSpec::from_practical(
                    c.metal_resistivity_uohm_cm,
                    c.metal_thickness_um,
                    c.contact_resistivity_mohm_cm2,
                    material,
                    c.max_length_hint_cm,
                )?
            }
            None => CollectorSpec::copper_pcb(),
        };
        Ok(CellPreset {
            name: "custom".to_string(),
            geometry,
            stack,
            collector,
        })
    }

    /// Polarization parameters: named preset, explicit params, or a fresh
    /// calibration from targets (in that priority order).
    pub fn polarization_params(&self) -> Result<PolarizationParams, CliError> {
        if let Some(name) = &self.polarization.preset {
            return match name.as_str() {
                "default" => Ok(PolarizationParams::calibrated_default()),
                "df" => Ok(PolarizationParams::calibrated_df()),
                "pcb" => Ok(PolarizationParams::calibrated_pcb()),
                other => Err(CliError::Validation(format!(
                    "unknown polarization preset `{other}` (default, df, pcb)"
                ))),
            };
        }
        if let Some(p) = &self.polarization.params {
            return p.to_params();
        }
        if let Some(t) = &self.polarization.calibration_targets {
            let cal = microcell_core::polarization::calibrate(&t.to_targets())?;
            return Ok(cal.params);
        }
        Ok(PolarizationParams::calibrated_default())
    }

    pub fn gas_spec(&self) -> Result<GalvanicCellSpec, CliError> {
        Ok(GalvanicCellSpec::from_practical(
            self.gas_cell.open_circuit_voltage_v,
            self.gas_cell.internal_resistance_ohm,
            self.gas_cell.capacity_mah,
            self.gas_cell.volume_cm3,
        )?)
    }

    /// Circuit spec; the bleed resistor may be sized from the given cell's
    /// leakage current.
    pub fn circuit_spec(&self, leakage_reference: Option<&FuelCellModel>) -> Result<CircuitSpec, CliError> {
        let gas = self.gas_spec()?;
        let bypass = if self.circuit.size_bypass_for_leakage {
            let fc = leakage_reference.ok_or_else(|| {
                CliError::Validation(
                    "size_bypass_for_leakage needs a cell with leakage".to_string(),
                )
            })?;
            let leak = fc.leakage_current();
            if !(leak > 0.0) {
                return Err(CliError::Validation(
                    "size_bypass_for_leakage needs a positive leakage current".to_string(),
                ));
            }
            Some(gas.open_circuit_voltage / leak - gas.internal_resistance)
        } else {
            self.circuit.bypass_resistor_ohm
        };
        let spec = CircuitSpec {
            bypass_resistor: bypass,
            diode_forward_drop: self.circuit.diode_forward_drop_v,
            plenum_volume: units::cm3_to_m3(self.circuit.plenum_volume_cm3),
            plenum_temperature: self.circuit.plenum_temperature_k,
            starvation_pressure_fraction: self.circuit.starvation_pressure_fraction,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn constraints(&self) -> DesignConstraints {
        self.constraints
            .clone()
            .unwrap_or_default()
            .to_constraints()
    }
}

impl SimulateStudy {
    pub fn to_profile(&self) -> Result<LoadProfile, CliError> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let mode = match s.mode.as_str() {
                    "constant-current" => LoadMode::ConstantCurrent { amperes: s.value },
                    "constant-power" => LoadMode::ConstantPower { watts: s.value },
                    "constant-resistance" => LoadMode::ConstantResistance { ohms: s.value },
                    "open" => LoadMode::Open,
                    other => {
                        return Err(CliError::Validation(format!(
                            "unknown load mode `{other}`"
                        )))
                    }
                };
                Ok(LoadSegment {
                    duration: s.duration_s,
                    mode,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let profile = LoadProfile {
            segments,
            repeat_count: self.repeat_count,
        };
        profile.validate().map_err(CliError::from)?;
        Ok(profile)
    }

    pub fn initial_plenum(&self, circuit: &CircuitSpec) -> Result<PlenumState, CliError> {
        match self.initial_plenum.as_str() {
            "ambient" => Ok(PlenumState::at_ambient(circuit)),
            "empty" => Ok(PlenumState::empty()),
            other => Err(CliError::Validation(format!(
                "initial_plenum must be `ambient` or `empty`, got `{other}`"
            ))),
        }
    }
}

/// Apply one `--set path.to.key=value` override onto the JSON tree,
/// creating intermediate objects as needed.
fn apply_override(root: &mut serde_json::Value, key: &str, raw: &str) -> Result<(), CliError> {
    let parsed: serde_json::Value = serde_json::from_str(raw)
        .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (depth, part) in parts.iter().enumerate() {
        let object = node.as_object_mut().ok_or_else(|| {
            CliError::Validation(format!("--set {key}: `{part}` is not an object"))
        })?;
        if depth + 1 == parts.len() {
            object.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = object
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(serde_json::Map::new()));
    }
    Ok(())
}
