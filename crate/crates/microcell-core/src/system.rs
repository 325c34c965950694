//! The fuel-cell / hydrogen-generator system circuit and its simulation.
//!
//! Topology: the gas-generating cell sits in series with the fuel cell, so
//! the hydrogen generation rate tracks the load current by Faraday's law and
//! both cells add to the system voltage. A Schottky diode anti-parallel to
//! the fuel cell carries the load during start-up, when drawing current
//! before hydrogen is available would reverse the fuel-cell polarity. A
//! bleed resistor `R_L` parallel to the gas cell draws surplus current,
//! over-generating hydrogen to compensate membrane leakage.
//!
//! Operating points are quasi-static: the electrochemistry is memoryless and
//! only the anode plenum filling and the gas-cell discharge carry state
//! between time steps. The scalar load equation is solved by bracketed
//! bisection on the load current.

use alloc::vec::Vec;

use crate::constants::{
    CHARGE_PER_MOL_H2, GAS_CONSTANT, STANDARD_PRESSURE, STANDARD_TEMPERATURE, V_REF,
};
use crate::error::{Error, Result};
use crate::hydrogen::{GalvanicCellSpec, GasCellState};
use crate::numeric::bisect;
use crate::polarization::{cell_voltage, PolarizationParams};
use crate::units;

/// A fuel cell as wired into the system: curve parameters, active area, and
/// the electron-transport series resistance of its collectors.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FuelCellModel {
    pub params: PolarizationParams,
    /// Active area [m²].
    pub active_area: f64,
    /// Collector series resistance [Ω·m²], added on top of the MEA-internal
    /// resistance inside `params`.
    pub series_resistance: f64,
}

impl FuelCellModel {
    pub fn new(params: PolarizationParams, active_area_cm2: f64, r_s_mohm_cm2: f64) -> Result<Self> {
        if !(active_area_cm2 > 0.0) {
            return Err(Error::invalid("active area must be positive"));
        }
        if r_s_mohm_cm2 < 0.0 {
            return Err(Error::invalid("series resistance must be non-negative"));
        }
        params.validate()?;
        Ok(FuelCellModel {
            params,
            active_area: units::cm2_to_m2(active_area_cm2),
            series_resistance: units::mohm_cm2_to_ohm_m2(r_s_mohm_cm2),
        })
    }

    /// Terminal voltage at cell current `i_fc` [A].
    fn voltage(&self, i_fc: f64) -> Result<f64> {
        cell_voltage(&self.params, i_fc / self.active_area, self.series_resistance)
    }

    /// Largest representable cell current [A], just below the limiting
    /// current density.
    fn max_current(&self) -> f64 {
        self.params.limiting_current_density * self.active_area * (1.0 - 1e-9)
    }

    /// Membrane leakage as a cell-level current [A].
    pub fn leakage_current(&self) -> f64 {
        self.params.leakage_current_density * self.active_area
    }
}

/// Passive components around the two cells, plus the anode plenum model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircuitSpec {
    /// Bleed resistor across the gas cell [Ω]; `None` = absent.
    pub bypass_resistor: Option<f64>,
    /// Diode forward drop [V].
    pub diode_forward_drop: f64,
    /// Anode plenum volume [m³].
    pub plenum_volume: f64,
    /// Plenum temperature [K].
    pub plenum_temperature: f64,
    /// Starvation threshold as a fraction of ambient pressure.
    pub starvation_pressure_fraction: f64,
}

impl Default for CircuitSpec {
    fn default() -> Self {
        CircuitSpec {
            bypass_resistor: None,
            diode_forward_drop: 0.3,
            plenum_volume: units::cm3_to_m3(0.1),
            plenum_temperature: STANDARD_TEMPERATURE,
            starvation_pressure_fraction: 0.5,
        }
    }
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.bypass_resistor {
            if !(r > 0.0) {
                return Err(Error::invalid("bleed resistor must be positive when present"));
            }
        }
        if !(self.diode_forward_drop > 0.0 && self.diode_forward_drop < 1.0) {
            return Err(Error::invalid("diode forward drop must lie in (0, 1) V"));
        }
        if !(self.plenum_volume > 0.0 && self.plenum_temperature > 0.0) {
            return Err(Error::invalid("plenum volume and temperature must be positive"));
        }
        if !(self.starvation_pressure_fraction >= 0.0 && self.starvation_pressure_fraction < 1.0) {
            return Err(Error::invalid("starvation fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Plenum moles at ambient pressure.
    pub fn plenum_moles_at_ambient(&self) -> f64 {
        STANDARD_PRESSURE * self.plenum_volume / (GAS_CONSTANT * self.plenum_temperature)
    }
}

/// Hydrogen inventory of the anode plenum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlenumState {
    /// Hydrogen content [mol].
    pub moles: f64,
}

impl PlenumState {
    pub fn at_ambient(circuit: &CircuitSpec) -> Self {
        PlenumState {
            moles: circuit.plenum_moles_at_ambient(),
        }
    }

    pub fn empty() -> Self {
        PlenumState { moles: 0.0 }
    }

    /// Ideal-gas pressure [Pa].
    pub fn pressure(&self, circuit: &CircuitSpec) -> f64 {
        self.moles * GAS_CONSTANT * circuit.plenum_temperature / circuit.plenum_volume
    }

    /// The fuel cell is starved when the plenum pressure falls below the
    /// configured fraction of ambient.
    pub fn starved(&self, circuit: &CircuitSpec) -> bool {
        self.pressure(circuit) < circuit.starvation_pressure_fraction * STANDARD_PRESSURE
    }
}

/// One load segment, as seen from the system terminals.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "kebab-case"))]
pub enum LoadMode {
    /// Current sink [A].
    ConstantCurrent { amperes: f64 },
    /// Power sink [W].
    ConstantPower { watts: f64 },
    /// Ohmic load [Ω].
    ConstantResistance { ohms: f64 },
    /// Open terminals.
    Open,
}

impl LoadMode {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            LoadMode::ConstantCurrent { amperes } => *amperes >= 0.0,
            LoadMode::ConstantPower { watts } => *watts >= 0.0,
            LoadMode::ConstantResistance { ohms } => *ohms > 0.0,
            LoadMode::Open => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("load values must be non-negative"))
        }
    }
}

/// A timed load segment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LoadSegment {
    /// Duration [s].
    pub duration: f64,
    pub mode: LoadMode,
}

/// Piecewise load profile, repeated `repeat_count` times.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LoadProfile {
    pub segments: Vec<LoadSegment>,
    pub repeat_count: u32,
}

impl LoadProfile {
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::invalid("load profile has no segments"));
        }
        if self.repeat_count < 1 {
            return Err(Error::invalid("repeat count must be at least 1"));
        }
        for seg in &self.segments {
            if !(seg.duration > 0.0) {
                return Err(Error::invalid("segment durations must be positive"));
            }
            seg.mode.validate()?;
        }
        Ok(())
    }

    /// Total simulated time: `repeat_count × Σ durations`.
    pub fn total_time(&self) -> f64 {
        self.repeat_count as f64 * self.segments.iter().map(|s| s.duration).sum::<f64>()
    }

    /// Shortest segment duration.
    pub fn min_segment_duration(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min)
    }

    /// A pulsed profile: `pulse_width` at constant power, then open until
    /// `interval` has elapsed.
    pub fn pulsed(pulse_power: f64, pulse_width: f64, interval: f64, repeats: u32) -> Result<Self> {
        if !(pulse_width > 0.0 && interval > pulse_width) {
            return Err(Error::invalid("pulse must be shorter than its interval"));
        }
        let profile = LoadProfile {
            segments: alloc::vec![
                LoadSegment {
                    duration: pulse_width,
                    mode: LoadMode::ConstantPower { watts: pulse_power },
                },
                LoadSegment {
                    duration: interval - pulse_width,
                    mode: LoadMode::Open,
                },
            ],
            repeat_count: repeats,
        };
        profile.validate()?;
        Ok(profile)
    }
}

/// A solved circuit state. Sign conventions: all currents are non-negative;
/// `i_bypass` flows through the bleed resistor, `i_diode` through the
/// Schottky bypass. `v_system = v_fc + v_gc` with `v_fc = −V_d` while the
/// diode conducts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OperatingPoint {
    pub i_fc: f64,
    pub v_fc: f64,
    pub i_gc: f64,
    pub v_gc: f64,
    pub i_diode: f64,
    pub i_bypass: f64,
    pub v_system: f64,
}

impl OperatingPoint {
    /// Load current at the system terminals.
    pub fn i_load(&self) -> f64 {
        self.i_fc + self.i_diode
    }
}

/// Gas-cell solution at a given series (load) current: terminal voltage,
/// cell current, and bleed current. The bleed resistor adds `v_gc / R_L` on
/// top of the series current.
fn solve_gas_cell(gas: &GalvanicCellSpec, circuit: &CircuitSpec, i_load: f64) -> (f64, f64, f64) {
    match circuit.bypass_resistor {
        None => {
            let v = (gas.open_circuit_voltage - gas.internal_resistance * i_load)
                .clamp(gas.voltage_floor, gas.voltage_ceiling);
            (v, i_load, 0.0)
        }
        Some(r_l) => {
            // v = V_oc − R_gc (i_load + v/R_L), then clamped.
            let v_unclamped = (gas.open_circuit_voltage - gas.internal_resistance * i_load)
                / (1.0 + gas.internal_resistance / r_l);
            let v = v_unclamped.clamp(gas.voltage_floor, gas.voltage_ceiling);
            let i_bypass = v / r_l;
            (v, i_load + i_bypass, i_bypass)
        }
    }
}

fn blocked_point(
    fc: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    i_load: f64,
) -> Result<OperatingPoint> {
    let v_fc = fc.voltage(i_load)?;
    let (v_gc, i_gc, i_bypass) = solve_gas_cell(gas, circuit, i_load);
    Ok(OperatingPoint {
        i_fc: i_load,
        v_fc,
        i_gc,
        v_gc,
        i_diode: 0.0,
        i_bypass,
        v_system: v_fc + v_gc,
    })
}

/// Diode-conducting point: the fuel cell is bypassed (`i_fc = 0`,
/// `v_fc = −V_d`) and the full load current runs through the diode while the
/// gas cell keeps generating.
fn diode_point(
    fc: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    i_load: f64,
) -> OperatingPoint {
    let _ = fc;
    let (v_gc, i_gc, i_bypass) = solve_gas_cell(gas, circuit, i_load);
    let v_fc = -circuit.diode_forward_drop;
    OperatingPoint {
        i_fc: 0.0,
        v_fc,
        i_gc,
        v_gc,
        i_diode: i_load,
        i_bypass,
        v_system: v_fc + v_gc,
    }
}

/// Idle point of a starved system with nothing forcing current: no current
/// anywhere on the series loop, diode blocked, no fuel-cell potential.
fn starved_idle(gas: &GalvanicCellSpec, circuit: &CircuitSpec) -> OperatingPoint {
    let (v_gc, i_gc, i_bypass) = solve_gas_cell(gas, circuit, 0.0);
    OperatingPoint {
        i_fc: 0.0,
        v_fc: 0.0,
        i_gc,
        v_gc,
        i_diode: 0.0,
        i_bypass,
        v_system: v_gc,
    }
}

const POWER_SCAN_POINTS: usize = 1024;
const BISECTION_TOL: f64 = 1e-9;

/// Smallest load current satisfying `constraint(i) = 0`, where the
/// constraint is negative below the root. Scans a uniform grid for the first
/// sign change, then bisects inside it. Returns `None` when the constraint
/// never reaches zero; `peak` reports its maximum over the scan.
fn ascending_root<F: FnMut(f64) -> Result<f64>>(
    i_max: f64,
    mut g: F,
) -> Result<(Option<f64>, f64)> {
    let g0 = g(0.0)?;
    let mut peak = g0;
    if g0 >= 0.0 {
        return Ok((Some(0.0), peak));
    }
    let mut prev_i = 0.0;
    for k in 1..=POWER_SCAN_POINTS {
        let i = i_max * (k as f64) / (POWER_SCAN_POINTS as f64);
        let gi = g(i)?;
        peak = peak.max(gi);
        if gi >= 0.0 {
            let mut err = None;
            let root = bisect(prev_i, i, BISECTION_TOL, BISECTION_TOL, |x| {
                match g(x) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            return Ok((Some(root), peak));
        }
        prev_i = i;
    }
    Ok((None, peak))
}

/// Solve the circuit for one load segment.
///
/// With hydrogen available the diode is blocked and the load equation is
/// solved on the fuel-cell current over `[0, i_lim · A)` (bisection with
/// absolute/relative tolerance 1e-9). A starved plenum, or a forced current
/// beyond the fuel cell's range, yields the diode-conducting point instead.
pub fn solve_operating_point(
    fc: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    load: &LoadMode,
    plenum: &PlenumState,
) -> Result<OperatingPoint> {
    circuit.validate()?;
    gas.validate()?;
    load.validate()?;
    let starved = plenum.starved(circuit);
    let i_max = fc.max_current();

    match *load {
        LoadMode::Open => {
            if starved {
                Ok(starved_idle(gas, circuit))
            } else {
                blocked_point(fc, gas, circuit, 0.0)
            }
        }
        LoadMode::ConstantCurrent { amperes } => {
            if starved || amperes >= i_max {
                if amperes == 0.0 && starved {
                    return Ok(starved_idle(gas, circuit));
                }
                Ok(diode_point(fc, gas, circuit, amperes))
            } else {
                blocked_point(fc, gas, circuit, amperes)
            }
        }
        LoadMode::ConstantPower { watts } => {
            if watts == 0.0 {
                return solve_operating_point(fc, gas, circuit, &LoadMode::Open, plenum);
            }
            if starved {
                // Power must come through the diode path.
                let (root, peak) = ascending_root(i_max, |i| {
                    let op = diode_point(fc, gas, circuit, i);
                    Ok(op.v_system * i - watts)
                })?;
                return match root {
                    Some(i) => Ok(diode_point(fc, gas, circuit, i)),
                    None => Err(Error::InfeasibleLoad {
                        requested: watts,
                        max_deliverable: (peak + watts).max(0.0),
                    }),
                };
            }
            let (root, peak) = ascending_root(i_max, |i| {
                let op = blocked_point(fc, gas, circuit, i)?;
                Ok(op.v_system * i - watts)
            })?;
            match root {
                Some(i) => blocked_point(fc, gas, circuit, i),
                None => Err(Error::InfeasibleLoad {
                    requested: watts,
                    max_deliverable: (peak + watts).max(0.0),
                }),
            }
        }
        LoadMode::ConstantResistance { ohms } => {
            if starved {
                let op0 = starved_idle(gas, circuit);
                if op0.v_gc - circuit.diode_forward_drop <= 0.0 {
                    // The gas cell cannot push current through the diode and
                    // the resistor; the loop stays open.
                    return Ok(op0);
                }
                let (root, _) = ascending_root(i_max, |i| {
                    let op = diode_point(fc, gas, circuit, i);
                    Ok(ohms * i - op.v_system)
                })?;
                return match root {
                    Some(i) => Ok(diode_point(fc, gas, circuit, i)),
                    None => Ok(diode_point(fc, gas, circuit, i_max)),
                };
            }
            let (root, _) = ascending_root(i_max, |i| {
                let op = blocked_point(fc, gas, circuit, i)?;
                Ok(ohms * i - op.v_system)
            })?;
            match root {
                Some(i) => blocked_point(fc, gas, circuit, i),
                // Even the limiting current cannot satisfy V = R·I: the load
                // would drive the cell past its range, so the diode takes it.
                None => Ok(diode_point(fc, gas, circuit, i_max)),
            }
        }
    }
}

/// One recorded instant of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimePoint {
    pub t: f64,
    pub i_fc: f64,
    pub v_fc: f64,
    pub i_gc: f64,
    pub v_gc: f64,
    pub i_diode: f64,
    pub i_bypass: f64,
    pub p_plenum: f64,
    pub h2_mol: f64,
}

/// Aggregate results of a transient simulation.
///
/// Hydrogen bookkeeping is charge-based: every mole field is a coulomb
/// accumulator divided by `2F`, so the balance
/// `generated − consumed − lost − plenum_delta = 0` holds to round-off and
/// `gas_cell_charge_used = 2F · h2_generated` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationSummary {
    /// Energy delivered at the system terminals [J].
    pub delivered_energy: f64,
    /// Energy delivered by the fuel cell alone [J].
    pub fuel_cell_energy: f64,
    pub h2_generated: f64,
    pub h2_consumed_by_reaction: f64,
    pub h2_lost_to_leakage: f64,
    /// Plenum content change over the run [mol].
    pub plenum_delta: f64,
    /// Delivered energy over the heating value `2F·V_ref` of all hydrogen
    /// used (consumed, leaked, or parked in the plenum).
    pub eta_system: f64,
    /// Charge-weighted mean fuel-cell voltage over `V_ref`.
    pub eta_voltage_mean: f64,
    /// Consumed hydrogen over all hydrogen used.
    pub eta_faraday_mean: f64,
    /// Total time spent starved [s].
    pub starvation_time: f64,
    /// Charge drawn from the gas cell [C].
    pub gas_cell_charge_used: f64,
    /// Simulated time [s].
    pub elapsed: f64,
}

impl SimulationSummary {
    /// Fuel-cell-referenced efficiency: the product of the mean voltage and
    /// Faraday factors.
    pub fn eta_fuel_cell(&self) -> f64 {
        self.eta_voltage_mean * self.eta_faraday_mean
    }
}

/// Full simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub series: Vec<TimePoint>,
    pub summary: SimulationSummary,
}

/// Fixed-step transient simulation of the system under a load profile.
///
/// Each step solves the quasi-static operating point, then advances the
/// plenum content by `(i_gc − i_fc − i_leak·A)·dt / 2F` and the gas-cell
/// charge by `i_gc·dt`. Leakage is curtailed when the plenum holds less
/// hydrogen than the nominal loss. The run stops early once the gas cell's
/// charge capacity is exhausted.
pub fn simulate(
    fc: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    profile: &LoadProfile,
    dt: f64,
    initial_plenum: PlenumState,
) -> Result<SimulationOutput> {
    profile.validate()?;
    circuit.validate()?;
    gas.validate()?;
    if !(dt > 0.0) {
        return Err(Error::Simulation(alloc::string::String::from(
            "time step must be positive",
        )));
    }
    if dt > profile.min_segment_duration() / 10.0 {
        return Err(Error::Simulation(alloc::string::String::from(
            "time step must be at most one tenth of the shortest segment",
        )));
    }
    if gas.capacity <= 0.0 {
        return Err(Error::Simulation(alloc::string::String::from(
            "gas cell capacity is already exhausted",
        )));
    }

    let leak_current = fc.leakage_current();
    let n_start = initial_plenum.moles;

    let mut gas_state = GasCellState::default();
    let mut q_generated = 0.0f64;
    let mut q_consumed = 0.0f64;
    let mut q_leaked = 0.0f64;
    let mut delivered = 0.0f64;
    let mut fc_energy = 0.0f64;
    let mut starvation_time = 0.0f64;
    let mut t = 0.0f64;
    let mut series = Vec::new();
    let mut exhausted = false;

    'outer: for _rep in 0..profile.repeat_count {
        for seg in &profile.segments {
            let whole_steps = crate::numeric::floor(seg.duration / dt) as u64;
            let remainder = seg.duration - whole_steps as f64 * dt;
            let mut step_index = 0u64;
            loop {
                let h = if step_index < whole_steps {
                    dt
                } else if remainder > 1e-12 * dt && step_index == whole_steps {
                    remainder
                } else {
                    break;
                };
                step_index += 1;

                let plenum = PlenumState {
                    moles: n_start + (q_generated - q_consumed - q_leaked) / CHARGE_PER_MOL_H2,
                };
                if plenum.starved(circuit) {
                    starvation_time += h;
                }
                let op = solve_operating_point(fc, gas, circuit, &seg.mode, &plenum)?;

                let dq_gen = op.i_gc * h;
                let dq_cons = op.i_fc * h;
                // Leakage cannot exceed what the plenum and this step's net
                // generation can supply.
                let available = (plenum.moles * CHARGE_PER_MOL_H2 + dq_gen - dq_cons).max(0.0);
                let dq_leak = (leak_current * h).min(available);

                q_generated += dq_gen;
                q_consumed += dq_cons;
                q_leaked += dq_leak;
                gas_state.draw(op.i_gc, h)?;
                delivered += op.v_system * op.i_load() * h;
                fc_energy += op.v_fc * op.i_fc * h;
                t += h;

                let n_now = n_start + (q_generated - q_consumed - q_leaked) / CHARGE_PER_MOL_H2;
                series.push(TimePoint {
                    t,
                    i_fc: op.i_fc,
                    v_fc: op.v_fc,
                    i_gc: op.i_gc,
                    v_gc: op.v_gc,
                    i_diode: op.i_diode,
                    i_bypass: op.i_bypass,
                    p_plenum: PlenumState { moles: n_now }.pressure(circuit),
                    h2_mol: n_now,
                });

                if gas_state.exhausted(gas) {
                    exhausted = true;
                    break 'outer;
                }
            }
        }
    }
    let _ = exhausted;

    let h2_generated = q_generated / CHARGE_PER_MOL_H2;
    let h2_consumed = q_consumed / CHARGE_PER_MOL_H2;
    let h2_lost = q_leaked / CHARGE_PER_MOL_H2;
    let plenum_delta = (q_generated - q_consumed - q_leaked) / CHARGE_PER_MOL_H2;
    let h2_used = h2_consumed + h2_lost + plenum_delta.max(0.0);
    let reference_energy = CHARGE_PER_MOL_H2 * V_REF * h2_used;
    let eta_system = if reference_energy > 0.0 {
        delivered / reference_energy
    } else {
        0.0
    };
    let eta_voltage_mean = if q_consumed > 0.0 {
        fc_energy / (V_REF * q_consumed)
    } else {
        0.0
    };
    let eta_faraday_mean = if h2_used > 0.0 { h2_consumed / h2_used } else { 0.0 };

    Ok(SimulationOutput {
        series,
        summary: SimulationSummary {
            delivered_energy: delivered,
            fuel_cell_energy: fc_energy,
            h2_generated,
            h2_consumed_by_reaction: h2_consumed,
            h2_lost_to_leakage: h2_lost,
            plenum_delta,
            eta_system,
            eta_voltage_mean,
            eta_faraday_mean,
            starvation_time,
            gas_cell_charge_used: gas_state.charge_drawn,
            elapsed: t,
        },
    })
}

/// Recommended step for a pulsed study: `min(1 ms, pulse_width / 10)`.
pub fn default_dt(pulse_width: f64) -> f64 {
    (pulse_width / 10.0).min(1e-3)
}

/// Base period of the duty-cycle grid: a nominal duty of 1/10 means one
/// pulse per 100 ms, 1/100 one per second, 1/1000 one per 10 s.
pub const DUTY_BASE_PERIOD: f64 = 0.010;

/// One duty-cycle study row.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DutyRow {
    pub duty: f64,
    /// Pulse interval [s].
    pub interval: f64,
    /// Mean delivered power [W].
    pub mean_power: f64,
    pub eta_df: f64,
    pub eta_pcb: f64,
}

/// Hydrogen-referenced system efficiency of two cells under the same pulsed
/// load, one row per duty cycle. The pulse width is fixed; the interval is
/// `DUTY_BASE_PERIOD / duty`. Each row simulates one full interval (the
/// quasi-static cycle is periodic, so one interval carries the mean).
pub fn duty_cycle_table(
    fc_df: &FuelCellModel,
    fc_pcb: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    pulse_power: f64,
    pulse_width: f64,
    duties: &[f64],
) -> Result<Vec<DutyRow>> {
    let mut rows = Vec::with_capacity(duties.len());
    for &duty in duties {
        if !(duty > 0.0 && duty <= 1.0) {
            return Err(Error::invalid("duty cycles must lie in (0, 1]"));
        }
        let interval = DUTY_BASE_PERIOD / duty;
        if interval <= pulse_width {
            return Err(Error::invalid("pulse width exceeds the duty interval"));
        }
        let profile = LoadProfile::pulsed(pulse_power, pulse_width, interval, 1)?;
        let dt = default_dt(pulse_width);
        let run_df = simulate(fc_df, gas, circuit, &profile, dt, PlenumState::at_ambient(circuit))?;
        let run_pcb =
            simulate(fc_pcb, gas, circuit, &profile, dt, PlenumState::at_ambient(circuit))?;
        rows.push(DutyRow {
            duty,
            interval,
            mean_power: run_df.summary.delivered_energy / run_df.summary.elapsed,
            eta_df: run_df.summary.eta_system,
            eta_pcb: run_pcb.summary.eta_system,
        });
    }
    Ok(rows)
}

/// One constant-current discharge row of the obtainable-energy study.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyRow {
    /// Load current [A].
    pub current: f64,
    /// Energy at the system terminals over the full gas-cell capacity [J].
    pub energy_full_system: f64,
    /// Energy counting the fuel-cell voltage only [J].
    pub energy_fc_only: f64,
    /// Delivered system energy over the hydrogen reference energy.
    pub eta_system: f64,
}

/// Obtainable energy of the system discharged at constant current until the
/// gas cell's charge capacity is exhausted.
///
/// The discharge is quasi-steady: the operating point is constant over the
/// run, so the energies follow from one solve per current instead of a
/// fixed-step integration over the multi-hour discharge. When membrane
/// leakage outruns the surplus generation of the bleed resistor, the fuel
/// cell can only run the sustainable fraction `θ = (i_gc − i_leak·A)/i_load`
/// of the time (starve/recover cycling); the remainder is carried by the
/// diode at `−V_d`.
pub fn obtainable_energy(
    fc: &FuelCellModel,
    gas: &GalvanicCellSpec,
    circuit: &CircuitSpec,
    currents: &[f64],
) -> Result<Vec<EnergyRow>> {
    let mut rows = Vec::with_capacity(currents.len());
    for &current in currents {
        if !(current > 0.0) {
            return Err(Error::invalid("discharge currents must be positive"));
        }
        if current >= fc.max_current() {
            return Err(Error::CurrentOutOfRange {
                value: current / fc.active_area,
                limit: fc.params.limiting_current_density,
            });
        }
        let plenum = PlenumState::at_ambient(circuit);
        let op = solve_operating_point(
            fc,
            gas,
            circuit,
            &LoadMode::ConstantCurrent { amperes: current },
            &plenum,
        )?;
        let total_time = if op.i_gc > 0.0 {
            gas.capacity / op.i_gc
        } else {
            0.0
        };
        let leak = fc.leakage_current();
        let theta = if current > 0.0 {
            ((op.i_gc - leak) / current).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let v_off = -circuit.diode_forward_drop;
        let energy_full = (theta * (op.v_fc + op.v_gc) + (1.0 - theta) * (v_off + op.v_gc))
            * current
            * total_time;
        let energy_fc = theta * op.v_fc * current * total_time;
        // Hydrogen used over the run: everything generated, minus what ends
        // up parked in the plenum (none, in steady state on net).
        let h2_used = op.i_gc * total_time / CHARGE_PER_MOL_H2;
        let eta_system = if h2_used > 0.0 {
            energy_full / (CHARGE_PER_MOL_H2 * V_REF * h2_used)
        } else {
            0.0
        };
        rows.push(EnergyRow {
            current,
            energy_full_system: energy_full,
            energy_fc_only: energy_fc,
            eta_system,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::PolarizationParams;
    use approx::assert_relative_eq;

    fn df_cell() -> FuelCellModel {
        FuelCellModel::new(PolarizationParams::calibrated_df(), 0.5, 0.0).unwrap()
    }

    fn pcb_cell() -> FuelCellModel {
        FuelCellModel::new(PolarizationParams::calibrated_pcb(), 2.0, 0.0).unwrap()
    }

    fn study_gas() -> GalvanicCellSpec {
        GalvanicCellSpec::from_practical(0.4, 2.0, 600.0, 3.5).unwrap()
    }

    fn circuit_with_bleed(fc: &FuelCellModel, gas: &GalvanicCellSpec) -> CircuitSpec {
        // R_L = V_oc/i_leak − R_gc makes the idle bleed exactly compensate
        // the membrane leakage.
        CircuitSpec {
            bypass_resistor: Some(gas.open_circuit_voltage / fc.leakage_current()
                - gas.internal_resistance),
            ..CircuitSpec::default()
        }
    }

    fn kcl_kvl_residuals(op: &OperatingPoint, circuit: &CircuitSpec) -> (f64, f64) {
        let kcl = (op.i_gc - op.i_load() - op.i_bypass).abs();
        let kvl = (op.v_system - op.v_fc - op.v_gc).abs();
        let _ = circuit;
        (kcl, kvl)
    }

    #[test]
    fn open_circuit_without_bleed_is_quiescent() {
        let fc = df_cell();
        let gas = GalvanicCellSpec::default();
        let circuit = CircuitSpec::default();
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::Open,
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap();
        assert_eq!(op.i_fc, 0.0);
        assert_eq!(op.i_gc, 0.0);
        assert_eq!(op.i_diode, 0.0);
        let ocv = cell_voltage(&fc.params, 0.0, 0.0).unwrap();
        assert_relative_eq!(op.v_fc, ocv, max_relative = 1e-12);
    }

    #[test]
    fn empty_plenum_under_load_conducts_through_diode() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::ConstantCurrent { amperes: 0.020 },
            &PlenumState::empty(),
        )
        .unwrap();
        assert_eq!(op.i_fc, 0.0);
        assert_relative_eq!(op.v_fc, -circuit.diode_forward_drop, max_relative = 1e-12);
        assert_relative_eq!(op.i_diode, 0.020, max_relative = 1e-12);
        // The gas cell still generates: load current plus bleed current.
        assert!(op.i_gc > 0.020);
        let (kcl, kvl) = kcl_kvl_residuals(&op, &circuit);
        assert!(kcl < 1e-12 && kvl < 1e-12);
    }

    #[test]
    fn constant_power_point_satisfies_load_and_kirchhoff() {
        let fc = pcb_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::ConstantPower { watts: 0.005 },
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap();
        assert!((op.v_system * op.i_load() - 0.005).abs() < 1e-8);
        let (kcl, kvl) = kcl_kvl_residuals(&op, &circuit);
        assert!(kcl < 1e-9 && kvl < 1e-9);
        // Diode complementarity: blocked here.
        assert_eq!(op.i_diode, 0.0);
        assert!(op.v_fc >= -circuit.diode_forward_drop);
    }

    #[test]
    fn infeasible_power_reports_maximum() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = CircuitSpec::default();
        let err = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::ConstantPower { watts: 100.0 },
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap_err();
        match err {
            Error::InfeasibleLoad {
                requested,
                max_deliverable,
            } => {
                assert_eq!(requested, 100.0);
                assert!(max_deliverable > 0.0 && max_deliverable < 1.0);
            }
            other => panic!("expected infeasible load, got {other:?}"),
        }
    }

    #[test]
    fn constant_resistance_solves_ohms_law() {
        let fc = pcb_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::ConstantResistance { ohms: 50.0 },
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap();
        assert!((op.v_system - 50.0 * op.i_load()).abs() < 1e-7);
    }

    #[test]
    fn series_loop_without_bleed_matches_currents_exactly() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = CircuitSpec::default();
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::ConstantCurrent { amperes: 0.010 },
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap();
        assert_eq!(op.i_gc, op.i_fc);
        assert_eq!(op.i_bypass, 0.0);
    }

    #[test]
    fn bleed_sized_for_leakage_gives_zero_drift_at_idle() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let op = solve_operating_point(
            &fc,
            &gas,
            &circuit,
            &LoadMode::Open,
            &PlenumState::at_ambient(&circuit),
        )
        .unwrap();
        // drift = (i_gc − i_fc − leak)/2F = (bleed − leak)/2F = 0.
        let drift = op.i_gc - op.i_fc - fc.leakage_current();
        assert!(drift.abs() < 1e-15, "drift = {drift}");
    }

    #[test]
    fn all_open_profile_delivers_nothing_and_balances() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let profile = LoadProfile {
            segments: alloc::vec![LoadSegment {
                duration: 1.0,
                mode: LoadMode::Open,
            }],
            repeat_count: 1,
        };
        let out = simulate(&fc, &gas, &circuit, &profile, 1e-2, PlenumState::at_ambient(&circuit))
            .unwrap();
        assert_eq!(out.summary.delivered_energy, 0.0);
        let s = &out.summary;
        let residual = s.h2_generated - s.h2_consumed_by_reaction - s.h2_lost_to_leakage
            - s.plenum_delta;
        assert!(residual.abs() <= 1e-9 * s.h2_generated.max(1e-30));
        assert_relative_eq!(
            s.gas_cell_charge_used,
            s.h2_generated * CHARGE_PER_MOL_H2,
            max_relative = 1e-12
        );
    }

    #[test]
    fn simulate_rejects_coarse_steps_and_dead_cells() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = CircuitSpec::default();
        let profile = LoadProfile {
            segments: alloc::vec![LoadSegment {
                duration: 0.1,
                mode: LoadMode::Open,
            }],
            repeat_count: 1,
        };
        assert!(matches!(
            simulate(&fc, &gas, &circuit, &profile, 0.05, PlenumState::at_ambient(&circuit)),
            Err(Error::Simulation(_))
        ));
        let dead = GalvanicCellSpec {
            capacity: 0.0,
            ..gas
        };
        assert!(matches!(
            simulate(&fc, &dead, &circuit, &profile, 1e-3, PlenumState::at_ambient(&circuit)),
            Err(Error::Simulation(_))
        ));
    }

    #[test]
    fn step_size_halving_barely_moves_delivered_energy() {
        let fc = pcb_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let profile = LoadProfile::pulsed(0.070, 0.007, 0.100, 3).unwrap();
        let run_a = simulate(&fc, &gas, &circuit, &profile, 2e-4, PlenumState::at_ambient(&circuit))
            .unwrap();
        let run_b = simulate(&fc, &gas, &circuit, &profile, 1e-4, PlenumState::at_ambient(&circuit))
            .unwrap();
        let rel = (run_a.summary.delivered_energy - run_b.summary.delivered_energy).abs()
            / run_b.summary.delivered_energy;
        assert!(rel < 0.005, "rel = {rel}");
    }

    #[test]
    fn starved_start_recovers_once_hydrogen_builds_up() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        // Refill rate ~5e-8 mol/s at 10 mA against a 2e-6 mol starvation
        // threshold: recovery lands near t = 40 s.
        let profile = LoadProfile {
            segments: alloc::vec![LoadSegment {
                duration: 60.0,
                mode: LoadMode::ConstantCurrent { amperes: 0.010 },
            }],
            repeat_count: 1,
        };
        let out = simulate(&fc, &gas, &circuit, &profile, 0.05, PlenumState::empty()).unwrap();
        assert!(out.summary.starvation_time > 0.0);
        assert!(out.summary.starvation_time < 60.0);
        let last = out.series.last().unwrap();
        assert!(last.i_fc > 0.0, "fuel cell never recovered");
        assert!(last.i_diode == 0.0);
    }

    #[test]
    fn duty_table_is_monotone_and_matches_mean_power() {
        let gas = study_gas();
        let fc_df = df_cell();
        let fc_pcb = pcb_cell();
        let circuit = circuit_with_bleed(&fc_df, &gas);
        let rows = duty_cycle_table(
            &fc_df,
            &fc_pcb,
            &gas,
            &circuit,
            0.070,
            0.007,
            &[0.001, 0.01, 0.1],
        )
        .unwrap();
        assert_relative_eq!(rows[2].interval, 0.1, max_relative = 1e-12);
        assert_relative_eq!(rows[2].mean_power, 4.9e-3, max_relative = 0.02);
        assert!(rows[0].eta_df < rows[1].eta_df);
        assert!(rows[1].eta_df < rows[2].eta_df);
        assert!(rows[0].eta_pcb < rows[1].eta_pcb);
        assert!(rows[1].eta_pcb < rows[2].eta_pcb);
    }

    #[test]
    fn obtainable_energy_trends() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = circuit_with_bleed(&fc, &gas);
        let rows = obtainable_energy(&fc, &gas, &circuit, &[0.010, 0.020, 0.035, 0.050]).unwrap();
        for pair in rows.windows(2) {
            assert!(
                pair[1].energy_full_system <= pair[0].energy_full_system,
                "energy not monotone: {pair:?}"
            );
        }
        for row in &rows {
            assert!(row.energy_full_system >= row.energy_fc_only);
        }
        // Zero capacity -> zero energy everywhere.
        let dead = GalvanicCellSpec { capacity: 0.0, ..gas };
        let rows = obtainable_energy(&fc, &dead, &circuit, &[0.010]).unwrap();
        assert_eq!(rows[0].energy_full_system, 0.0);
        assert_eq!(rows[0].energy_fc_only, 0.0);
    }

    #[test]
    fn small_cell_wins_on_efficiency_at_low_current() {
        let gas = study_gas();
        let fc_df = df_cell();
        let fc_pcb = pcb_cell();
        let circuit_df = circuit_with_bleed(&fc_df, &gas);
        let circuit_pcb = circuit_with_bleed(&fc_pcb, &gas);
        let df = obtainable_energy(&fc_df, &gas, &circuit_df, &[0.005]).unwrap();
        let pcb = obtainable_energy(&fc_pcb, &gas, &circuit_pcb, &[0.005]).unwrap();
        assert!(
            df[0].eta_system > pcb[0].eta_system,
            "DF {} vs PCB {}",
            df[0].eta_system,
            pcb[0].eta_system
        );
    }

    #[test]
    fn beyond_limiting_current_is_infeasible() {
        let fc = df_cell();
        let gas = study_gas();
        let circuit = CircuitSpec::default();
        let err = obtainable_energy(&fc, &gas, &circuit, &[100.0]).unwrap_err();
        assert!(matches!(err, Error::CurrentOutOfRange { .. }));
    }
}
