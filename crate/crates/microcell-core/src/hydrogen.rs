//! Galvanic Zn/H₂O hydrogen-generation cell.
//!
//! The button cell produces hydrogen at its cathode while discharging; the
//! flow is tied to the cell current by Faraday's law, `n_dot = I / (2F)`, so
//! rate control reduces to current control. Its terminal voltage stays
//! between 0 and 0.4 V and adds to the system voltage when the cell sits in
//! series with the fuel cell.
//!
//! The voltage model is a linear internal-resistance drop clamped into the
//! quoted range; the published data bounds the range only, so the default
//! open-circuit voltage, internal resistance, and capacity are configuration
//! values, not measured ground truth.

use crate::constants::CHARGE_PER_MOL_H2;
use crate::error::{Error, Result};
use crate::units;

/// Electrical model and capacity of the gas-generating cell. SI internally
/// (Ω, V, C, m³).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GalvanicCellSpec {
    /// Open-circuit voltage [V].
    pub open_circuit_voltage: f64,
    /// Internal resistance [Ω].
    pub internal_resistance: f64,
    /// Lower clamp of the terminal voltage [V].
    pub voltage_floor: f64,
    /// Upper clamp of the terminal voltage [V].
    pub voltage_ceiling: f64,
    /// Charge capacity [C].
    pub capacity: f64,
    /// Cell volume [m³]; informational (the button cell is 3.5 cm³).
    pub volume: f64,
}

impl Default for GalvanicCellSpec {
    /// 0.4 V open circuit, 8 Ω internal resistance (spans the full 0–0.4 V
    /// range over 0–50 mA), 600 mAh, 3.5 cm³.
    fn default() -> Self {
        GalvanicCellSpec {
            open_circuit_voltage: 0.4,
            internal_resistance: 8.0,
            voltage_floor: 0.0,
            voltage_ceiling: 0.4,
            capacity: units::mah_to_coulomb(600.0),
            volume: units::cm3_to_m3(3.5),
        }
    }
}

impl GalvanicCellSpec {
    /// Build from practical units: capacity in mAh, volume in cm³.
    pub fn from_practical(
        open_circuit_voltage: f64,
        internal_resistance_ohm: f64,
        capacity_mah: f64,
        volume_cm3: f64,
    ) -> Result<Self> {
        let spec = GalvanicCellSpec {
            open_circuit_voltage,
            internal_resistance: internal_resistance_ohm,
            capacity: units::mah_to_coulomb(capacity_mah),
            volume: units::cm3_to_m3(volume_cm3),
            ..GalvanicCellSpec::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.open_circuit_voltage >= 0.0) {
            return Err(Error::invalid("gas cell open-circuit voltage must be non-negative"));
        }
        if !(self.internal_resistance >= 0.0) {
            return Err(Error::invalid("gas cell internal resistance must be non-negative"));
        }
        if !(self.voltage_floor <= self.voltage_ceiling) {
            return Err(Error::invalid("gas cell voltage clamp is inverted"));
        }
        if self.capacity < 0.0 {
            return Err(Error::invalid("gas cell capacity must be non-negative"));
        }
        Ok(())
    }
}

/// Discharge bookkeeping of one gas cell. Hydrogen output is derived from
/// the drawn charge, so the Faraday identity
/// `hydrogen_generated · 2F = charge_drawn` holds exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasCellState {
    /// Total charge drawn from the cell [C].
    pub charge_drawn: f64,
}

impl GasCellState {
    /// Hydrogen generated so far [mol].
    #[inline]
    pub fn hydrogen_generated(&self) -> f64 {
        self.charge_drawn / CHARGE_PER_MOL_H2
    }

    /// Draw `current` amperes for `dt` seconds.
    pub fn draw(&mut self, current: f64, dt: f64) -> Result<()> {
        if current < 0.0 {
            return Err(Error::invalid("the gas cell is not rechargeable"));
        }
        if dt < 0.0 {
            return Err(Error::invalid("time step must be non-negative"));
        }
        self.charge_drawn += current * dt;
        Ok(())
    }

    /// Remaining charge before exhaustion [C].
    pub fn remaining(&self, spec: &GalvanicCellSpec) -> f64 {
        (spec.capacity - self.charge_drawn).max(0.0)
    }

    pub fn exhausted(&self, spec: &GalvanicCellSpec) -> bool {
        self.charge_drawn >= spec.capacity
    }
}

/// Hydrogen generation rate at `current` amperes [mol/s]: `I / (2F)`.
pub fn h2_rate(current: f64) -> Result<f64> {
    if current < 0.0 {
        return Err(Error::invalid("gas cell current must be non-negative"));
    }
    Ok(current / CHARGE_PER_MOL_H2)
}

/// Terminal voltage at `current` amperes:
/// `clamp(V_oc − R_gc · I, floor, ceiling)`.
pub fn terminal_voltage(spec: &GalvanicCellSpec, current: f64) -> Result<f64> {
    if current < 0.0 {
        return Err(Error::invalid("gas cell current must be non-negative"));
    }
    Ok((spec.open_circuit_voltage - spec.internal_resistance * current)
        .clamp(spec.voltage_floor, spec.voltage_ceiling))
}

/// Total hydrogen obtainable from the cell's charge capacity [mol].
pub fn total_h2_capacity(spec: &GalvanicCellSpec) -> f64 {
    spec.capacity / CHARGE_PER_MOL_H2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{GAS_CONSTANT, STANDARD_PRESSURE, STANDARD_TEMPERATURE};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rate_matches_faraday_arithmetic() {
        assert_eq!(h2_rate(0.0).unwrap(), 0.0);
        assert_relative_eq!(h2_rate(1.0).unwrap(), 5.1821e-6, max_relative = 1e-4);
        assert_relative_eq!(h2_rate(0.010).unwrap(), 5.1821e-8, max_relative = 1e-4);
        assert!(h2_rate(-0.1).is_err());
    }

    #[test]
    fn one_amp_is_about_7_6_ml_per_minute() {
        let rate = h2_rate(1.0).unwrap();
        let ml_per_min =
            rate * GAS_CONSTANT * STANDARD_TEMPERATURE / STANDARD_PRESSURE * 1e6 * 60.0;
        assert_relative_eq!(ml_per_min, 7.6, max_relative = 0.01);
    }

    #[test]
    fn terminal_voltage_spot_values() {
        let spec = GalvanicCellSpec::default();
        assert_eq!(terminal_voltage(&spec, 0.0).unwrap(), 0.4);
        // I = V_oc/R drives the terminal to the floor.
        assert_eq!(terminal_voltage(&spec, 0.4 / 8.0).unwrap(), 0.0);
        assert_relative_eq!(
            terminal_voltage(&spec, 0.025).unwrap(),
            0.2,
            max_relative = 1e-12
        );
    }

    #[test]
    fn capacity_spot_values() {
        let mut spec = GalvanicCellSpec {
            capacity: 0.0,
            ..GalvanicCellSpec::default()
        };
        assert_eq!(total_h2_capacity(&spec), 0.0);
        spec.capacity = units::mah_to_coulomb(600.0);
        assert_relative_eq!(total_h2_capacity(&spec), 1.119e-2, max_relative = 1e-3);
        // 1.119e-2 mol is ~274 ml at standard conditions.
        let ml = total_h2_capacity(&spec) * GAS_CONSTANT * STANDARD_TEMPERATURE
            / STANDARD_PRESSURE
            * 1e6;
        assert_relative_eq!(ml, 274.0, max_relative = 0.01);
        let doubled = GalvanicCellSpec {
            capacity: 2.0 * spec.capacity,
            ..spec
        };
        assert_relative_eq!(
            total_h2_capacity(&doubled),
            2.0 * total_h2_capacity(&spec),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bookkeeping_is_exact_over_many_draws() {
        let mut state = GasCellState::default();
        for k in 0..1000 {
            state.draw(1e-3 * (k % 7) as f64, 0.125).unwrap();
        }
        let identity = state.hydrogen_generated() * CHARGE_PER_MOL_H2;
        assert_relative_eq!(identity, state.charge_drawn, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn voltage_always_within_bounds(current in 0.0..10.0f64, r in 0.0..100.0f64) {
            let spec = GalvanicCellSpec {
                internal_resistance: r,
                ..GalvanicCellSpec::default()
            };
            let v = terminal_voltage(&spec, current).unwrap();
            prop_assert!((0.0..=0.4).contains(&v));
        }

        #[test]
        fn voltage_non_increasing_in_current(a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let spec = GalvanicCellSpec::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(
                terminal_voltage(&spec, hi).unwrap() <= terminal_voltage(&spec, lo).unwrap()
            );
        }
    }
}
