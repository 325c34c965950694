//! Boundary unit conversions.
//!
//! Everything inside the crate is SI: m, m², Ω·m (resistivity), Ω·m² (area
//! resistance), A/m² (current density), W/m² (power density), C, mol, s, V, J.
//! Inputs and outputs use the practical units common for planar micro fuel
//! cells. Each conversion is a single multiplication, so practical → SI →
//! practical round-trips are exact up to one floating-point rounding.

/// µm → m.
#[inline]
pub fn um_to_m(um: f64) -> f64 {
    um * 1e-6
}

/// m → µm.
#[inline]
pub fn m_to_um(m: f64) -> f64 {
    m * 1e6
}

/// cm → m.
#[inline]
pub fn cm_to_m(cm: f64) -> f64 {
    cm * 1e-2
}

/// m → cm.
#[inline]
pub fn m_to_cm(m: f64) -> f64 {
    m * 1e2
}

/// cm² → m².
#[inline]
pub fn cm2_to_m2(cm2: f64) -> f64 {
    cm2 * 1e-4
}

/// m² → cm².
#[inline]
pub fn m2_to_cm2(m2: f64) -> f64 {
    m2 * 1e4
}

/// mΩ·cm (resistivity) → Ω·m.
#[inline]
pub fn mohm_cm_to_ohm_m(r: f64) -> f64 {
    r * 1e-5
}

/// Ω·m → mΩ·cm.
#[inline]
pub fn ohm_m_to_mohm_cm(r: f64) -> f64 {
    r * 1e5
}

/// µΩ·cm (metal resistivity) → Ω·m.
#[inline]
pub fn uohm_cm_to_ohm_m(r: f64) -> f64 {
    r * 1e-8
}

/// Ω·m → µΩ·cm.
#[inline]
pub fn ohm_m_to_uohm_cm(r: f64) -> f64 {
    r * 1e8
}

/// mΩ·cm² (area resistance) → Ω·m².
#[inline]
pub fn mohm_cm2_to_ohm_m2(r: f64) -> f64 {
    r * 1e-7
}

/// Ω·m² → mΩ·cm².
#[inline]
pub fn ohm_m2_to_mohm_cm2(r: f64) -> f64 {
    r * 1e7
}

/// mA/cm² → A/m².
#[inline]
pub fn ma_cm2_to_a_m2(i: f64) -> f64 {
    i * 10.0
}

/// A/m² → mA/cm².
#[inline]
pub fn a_m2_to_ma_cm2(i: f64) -> f64 {
    i * 0.1
}

/// mW/cm² → W/m².
#[inline]
pub fn mw_cm2_to_w_m2(p: f64) -> f64 {
    p * 10.0
}

/// W/m² → mW/cm².
#[inline]
pub fn w_m2_to_mw_cm2(p: f64) -> f64 {
    p * 0.1
}

/// mAh → C.
#[inline]
pub fn mah_to_coulomb(q: f64) -> f64 {
    q * 3.6
}

/// C → mAh.
#[inline]
pub fn coulomb_to_mah(q: f64) -> f64 {
    q / 3.6
}

/// cm³ → m³.
#[inline]
pub fn cm3_to_m3(v: f64) -> f64 {
    v * 1e-6
}

/// m³ → cm³.
#[inline]
pub fn m3_to_cm3(v: f64) -> f64 {
    v * 1e6
}
