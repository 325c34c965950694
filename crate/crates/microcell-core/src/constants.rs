//! Physical constants used throughout the models.

/// Faraday constant [C/mol].
pub const FARADAY: f64 = 96485.33;

/// Electrons transferred per H₂ molecule (cathodic water reduction on the
/// generator side, anodic oxidation on the fuel-cell side).
pub const ELECTRONS_PER_H2: f64 = 2.0;

/// Charge per mole of H₂ [C/mol]: `2 F`.
pub const CHARGE_PER_MOL_H2: f64 = ELECTRONS_PER_H2 * FARADAY;

/// Reversible reference voltage of the H₂/O₂ reaction [V]; the denominator
/// of the voltage efficiency.
pub const V_REF: f64 = 1.23;

/// Molar gas constant [J/(mol·K)].
pub const GAS_CONSTANT: f64 = 8.314;

/// Standard temperature [K].
pub const STANDARD_TEMPERATURE: f64 = 298.15;

/// Standard pressure [Pa].
pub const STANDARD_PRESSURE: f64 = 101_325.0;

/// Moles of H₂ equivalent to one coulomb of charge.
#[inline]
pub fn mol_per_coulomb() -> f64 {
    1.0 / CHARGE_PER_MOL_H2
}
