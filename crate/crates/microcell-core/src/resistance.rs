//! Electron-transport series resistance of a planar electrode side.
//!
//! The current path from the reaction zone to the cell terminal is modeled
//! one-dimensionally over one periodic unit cell of pitch `p` with channel
//! width `w` (opening ratio `phi = w/p`):
//!
//! - in-plane: lateral conduction in the catalyst/GDL sheet over the channel,
//!   with uniformly distributed current generation. Dissipation-equivalent
//!   area resistance `R_i = w³ / (12 · G · p)` where `G = Σ t/ρ_I` is the
//!   combined lateral sheet conductance of the conducting layers,
//! - through-plane: descent through the stack concentrated over the rib
//!   fraction, `R_t = Σ(ρ_T · t) / (1 − phi)`,
//! - contact: `R_c = ρ_cs / (1 − phi)`,
//! - metal: distributed collection along a collector finger of length `l`
//!   feeding a bus at one end, `R_m = ρ_m · p · l² / (3 · (p − w) · t_m)`
//!   (the 1/3 factor from uniformly distributed generation).
//!
//! All four terms and their sum are area resistances [Ω·m²], normalized to
//! the active cell area. The total must stay below ~100 mΩ·cm² to keep power
//! and efficiency losses in the one-percent region.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{CellGeometry, CellPreset, CollectorSpec, LayerSpec};
use crate::units;

/// Which electrode side a breakdown describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    Anode,
    Cathode,
    Both,
}

/// Area-resistance decomposition of one (or both) electrode sides [Ω·m²].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResistanceBreakdown {
    pub r_in_plane: f64,
    pub r_through_plane: f64,
    pub r_contact: f64,
    pub r_metal: f64,
    pub r_total: f64,
    pub side: Side,
}

impl ResistanceBreakdown {
    fn from_components(r_i: f64, r_t: f64, r_c: f64, r_m: f64, side: Side) -> Self {
        ResistanceBreakdown {
            r_in_plane: r_i,
            r_through_plane: r_t,
            r_contact: r_c,
            r_metal: r_m,
            r_total: r_i + r_t + r_c + r_m,
            side,
        }
    }

    /// Component-wise sum of two sides.
    pub fn combine(a: &ResistanceBreakdown, b: &ResistanceBreakdown) -> Self {
        ResistanceBreakdown::from_components(
            a.r_in_plane + b.r_in_plane,
            a.r_through_plane + b.r_through_plane,
            a.r_contact + b.r_contact,
            a.r_metal + b.r_metal,
            Side::Both,
        )
    }

    /// Total in mΩ·cm².
    pub fn total_mohm_cm2(&self) -> f64 {
        units::ohm_m2_to_mohm_cm2(self.r_total)
    }
}

fn check_geometry(geometry: &CellGeometry) -> Result<()> {
    geometry.validate()
}

/// Combined lateral sheet conductance of the stack [S·square]. `None` when a
/// layer is an ideal conductor (zero resistivity).
fn sheet_conductance(layers: &[LayerSpec]) -> Option<f64> {
    let mut g = 0.0;
    for layer in layers {
        if layer.in_plane_resistivity == 0.0 {
            return None;
        }
        g += layer.thickness / layer.in_plane_resistivity;
    }
    Some(g)
}

/// In-plane (lateral) area resistance `R_i = w³ / (12 · G · p)` [Ω·m²].
///
/// Without a GDL the catalyst layer alone carries the lateral current; with
/// one, catalyst and GDL conduct in parallel.
pub fn in_plane_resistance(geometry: &CellGeometry, layers: &[LayerSpec]) -> Result<f64> {
    check_geometry(geometry)?;
    if layers.is_empty() {
        return Err(Error::invalid("at least one conducting layer is required"));
    }
    for layer in layers {
        layer.validate()?;
    }
    let w = geometry.channel_width;
    match sheet_conductance(layers) {
        None => Ok(0.0),
        Some(g) => Ok(w * w * w / (12.0 * g * geometry.pitch)),
    }
}

/// Through-plane area resistance `R_t = Σ(ρ_T · t) / (1 − phi)` [Ω·m²].
pub fn through_plane_resistance(geometry: &CellGeometry, layers: &[LayerSpec]) -> Result<f64> {
    check_geometry(geometry)?;
    for layer in layers {
        layer.validate()?;
    }
    let phi = geometry.opening_ratio();
    let sum: f64 = layers
        .iter()
        .map(|l| l.through_plane_resistivity * l.thickness)
        .sum();
    Ok(sum / (1.0 - phi))
}

/// Contact area resistance `R_c = ρ_cs / (1 − phi)` [Ω·m²].
pub fn contact_resistance(geometry: &CellGeometry, collector: &CollectorSpec) -> Result<f64> {
    check_geometry(geometry)?;
    collector.validate()?;
    Ok(collector.contact_resistivity / (1.0 - geometry.opening_ratio()))
}

/// Metal collector area resistance
/// `R_m = ρ_m · p · l² / (3 · (p − w) · t_m)` [Ω·m²].
pub fn metal_resistance(geometry: &CellGeometry, collector: &CollectorSpec) -> Result<f64> {
    check_geometry(geometry)?;
    collector.validate()?;
    let rib = geometry.rib_width();
    if !(rib > 0.0) {
        return Err(Error::invalid("rib width must be positive"));
    }
    let l = geometry.finger_length;
    Ok(collector.metal_resistivity * geometry.pitch * l * l
        / (3.0 * rib * collector.metal_thickness))
}

/// Full breakdown of one electrode side.
pub fn side_resistance(
    geometry: &CellGeometry,
    layers: &[LayerSpec],
    collector: &CollectorSpec,
    side: Side,
) -> Result<ResistanceBreakdown> {
    let r_i = in_plane_resistance(geometry, layers)?;
    let r_t = through_plane_resistance(geometry, layers)?;
    let r_c = contact_resistance(geometry, collector)?;
    let r_m = metal_resistance(geometry, collector)?;
    Ok(ResistanceBreakdown::from_components(r_i, r_t, r_c, r_m, side))
}

/// Series resistance of the whole cell: anode and cathode contributions
/// summed component-wise (`side = Both`).
pub fn series_resistance(
    geometry: &CellGeometry,
    anode_stack: &[LayerSpec],
    cathode_stack: &[LayerSpec],
    anode_collector: &CollectorSpec,
    cathode_collector: &CollectorSpec,
) -> Result<ResistanceBreakdown> {
    let anode = side_resistance(geometry, anode_stack, anode_collector, Side::Anode)?;
    let cathode = side_resistance(geometry, cathode_stack, cathode_collector, Side::Cathode)?;
    Ok(ResistanceBreakdown::combine(&anode, &cathode))
}

/// One row of a pitch sweep; resistances in mΩ·cm² for direct export.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub pitch_um: f64,
    pub r_in_plane: f64,
    pub r_through_plane: f64,
    pub r_contact: f64,
    pub r_metal: f64,
    pub r_total: f64,
}

/// Cathode-side resistance components as a function of channel pitch at a
/// fixed opening ratio. One row per pitch, in grid order.
pub fn resistance_sweep(
    preset: &CellPreset,
    pitches_um: &[f64],
    opening_ratio: f64,
) -> Result<Vec<SweepRow>> {
    if pitches_um.is_empty() {
        return Err(Error::invalid("pitch range is empty"));
    }
    if !(opening_ratio > 0.0 && opening_ratio < 1.0) {
        return Err(Error::invalid("opening ratio must lie in (0, 1)"));
    }
    for w in pitches_um.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::invalid("pitch range must be strictly increasing"));
        }
    }
    if pitches_um[0] <= 0.0 || *pitches_um.last().unwrap() > 10_000.0 {
        return Err(Error::invalid("pitches must lie in (0, 10 mm]"));
    }

    let mut rows = Vec::with_capacity(pitches_um.len());
    for &pitch_um in pitches_um {
        let pitch = units::um_to_m(pitch_um);
        let mut geometry = preset.geometry.clone();
        geometry.pitch = pitch;
        geometry.channel_width = opening_ratio * pitch;
        let breakdown = side_resistance(&geometry, &preset.stack, &preset.collector, Side::Cathode)?;
        rows.push(SweepRow {
            pitch_um,
            r_in_plane: units::ohm_m2_to_mohm_cm2(breakdown.r_in_plane),
            r_through_plane: units::ohm_m2_to_mohm_cm2(breakdown.r_through_plane),
            r_contact: units::ohm_m2_to_mohm_cm2(breakdown.r_contact),
            r_metal: units::ohm_m2_to_mohm_cm2(breakdown.r_metal),
            r_total: units::ohm_m2_to_mohm_cm2(breakdown.r_total),
        });
    }
    Ok(rows)
}
