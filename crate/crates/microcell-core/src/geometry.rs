//! Planar cell geometry, conductive layer stacks, and current collectors.
//!
//! All stored values are SI (m, m², Ω·m, Ω·m²); constructors taking practical
//! units are provided and are the intended entry points.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::units;

/// Planar cell geometry: a periodic current-collector pattern of pitch `p`
/// with gas openings of width `w` (opening ratio `w/p`), collector fingers of
/// length `l` feeding a bus at one end.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellGeometry {
    /// Active area [m²].
    pub active_area: f64,
    /// Channel pitch [m].
    pub pitch: f64,
    /// Channel (opening) width [m], `0 < width < pitch`.
    pub channel_width: f64,
    /// Collector finger length [m].
    pub finger_length: f64,
    /// Whether a gas diffusion layer is present on top of the catalyst.
    pub has_gdl: bool,
    /// Number of cells in a planar stack.
    pub n_cells: u32,
    /// Electrode spacing between adjacent cells of a planar stack [m].
    /// Informational; shunt leakage between cells is a separate model input.
    pub intercell_gap: f64,
}

impl CellGeometry {
    /// Build from practical units: area in cm², pitch/width/gap in µm,
    /// finger length in cm.
    pub fn from_practical(
        active_area_cm2: f64,
        pitch_um: f64,
        channel_width_um: f64,
        finger_length_cm: f64,
        has_gdl: bool,
    ) -> Result<Self> {
        let geometry = CellGeometry {
            active_area: units::cm2_to_m2(active_area_cm2),
            pitch: units::um_to_m(pitch_um),
            channel_width: units::um_to_m(channel_width_um),
            finger_length: units::cm_to_m(finger_length_cm),
            has_gdl,
            n_cells: 1,
            intercell_gap: 0.0,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.active_area > 0.0) {
            return Err(Error::invalid("active area must be positive"));
        }
        if !(self.pitch > 0.0) {
            return Err(Error::invalid("pitch must be positive"));
        }
        if !(self.channel_width > 0.0 && self.channel_width < self.pitch) {
            return Err(Error::invalid("channel width must lie in (0, pitch)"));
        }
        if !(self.finger_length > 0.0) {
            return Err(Error::invalid("finger length must be positive"));
        }
        if self.n_cells < 1 {
            return Err(Error::invalid("stack needs at least one cell"));
        }
        if self.intercell_gap < 0.0 {
            return Err(Error::invalid("intercell gap must be non-negative"));
        }
        Ok(())
    }

    /// Opening ratio `phi = w/p`, in (0, 1).
    #[inline]
    pub fn opening_ratio(&self) -> f64 {
        self.channel_width / self.pitch
    }

    /// Rib width `p - w` [m].
    #[inline]
    pub fn rib_width(&self) -> f64 {
        self.pitch - self.channel_width
    }

    /// Copy with a new pitch at the same opening ratio.
    pub fn with_pitch_same_ratio(&self, pitch: f64) -> Self {
        let mut g = self.clone();
        g.channel_width = self.opening_ratio() * pitch;
        g.pitch = pitch;
        g
    }
}

/// One conductive layer of the electrode stack (catalyst layer or GDL).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerSpec {
    /// In-plane resistivity [Ω·m].
    pub in_plane_resistivity: f64,
    /// Through-plane resistivity [Ω·m].
    pub through_plane_resistivity: f64,
    /// Layer thickness [m].
    pub thickness: f64,
}

impl LayerSpec {
    /// Build from practical units: resistivities in mΩ·cm, thickness in µm.
    pub fn from_practical(rho_in_mohm_cm: f64, rho_through_mohm_cm: f64, t_um: f64) -> Result<Self> {
        let layer = LayerSpec {
            in_plane_resistivity: units::mohm_cm_to_ohm_m(rho_in_mohm_cm),
            through_plane_resistivity: units::mohm_cm_to_ohm_m(rho_through_mohm_cm),
            thickness: units::um_to_m(t_um),
        };
        layer.validate()?;
        Ok(layer)
    }

    /// Zero resistivities are accepted as the ideal-conductor limit; the
    /// thickness must be a real length.
    pub fn validate(&self) -> Result<()> {
        if self.in_plane_resistivity < 0.0 || self.through_plane_resistivity < 0.0 {
            return Err(Error::invalid("layer resistivities must be non-negative"));
        }
        if !(self.thickness > 0.0) {
            return Err(Error::invalid("layer thickness must be positive"));
        }
        Ok(())
    }

    /// Catalyst layer of the commercial MEA used by all presets:
    /// 360 mΩ·cm in-plane and through-plane, 10 µm thick.
    pub fn catalyst() -> Self {
        LayerSpec::from_practical(360.0, 360.0, 10.0).expect("catalyst layer values are valid")
    }

    /// Gas diffusion layer: 50 mΩ·cm in-plane, 400 mΩ·cm through-plane,
    /// 325 µm thick.
    pub fn gdl() -> Self {
        LayerSpec::from_practical(50.0, 400.0, 325.0).expect("GDL layer values are valid")
    }
}

/// Current collector material, as fabricated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CollectorMaterial {
    /// Electroplated gold on foil (thin-film cells).
    GoldFilm,
    /// Electroplated copper lines on printed circuit board.
    CopperPcb,
    /// Gold-plated stainless steel mesh, modeled as an equivalent solid
    /// layer of effective thickness.
    SteelMesh,
    /// Anything else.
    Custom,
}

impl CollectorMaterial {
    pub fn as_str(&self) -> &'static str {
        match self {
            CollectorMaterial::GoldFilm => "gold-film",
            CollectorMaterial::CopperPcb => "copper-pcb",
            CollectorMaterial::SteelMesh => "steel-mesh",
            CollectorMaterial::Custom => "custom",
        }
    }
}

/// Metallic current collector on one electrode side.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollectorSpec {
    /// Metal resistivity [Ω·m].
    pub metal_resistivity: f64,
    /// Metal thickness [m]. For the steel mesh this is an effective solid
    /// thickness (half the 150 µm wire diameter; the fill factor is not
    /// known).
    pub metal_thickness: f64,
    /// Contact resistivity between collector and GDL/MEA [Ω·m²].
    pub contact_resistivity: f64,
    /// Material tag, used by the design length checks.
    pub material: CollectorMaterial,
    /// Longest advisable finger for this material [m].
    pub max_length_hint: f64,
}

impl CollectorSpec {
    /// Build from practical units: metal resistivity in µΩ·cm, thickness in
    /// µm, contact resistivity in mΩ·cm², length hint in cm.
    pub fn from_practical(
        rho_metal_uohm_cm: f64,
        t_metal_um: f64,
        contact_mohm_cm2: f64,
        material: CollectorMaterial,
        max_length_hint_cm: f64,
    ) -> Result<Self> {
        let collector = CollectorSpec {
            metal_resistivity: units::uohm_cm_to_ohm_m(rho_metal_uohm_cm),
            metal_thickness: units::um_to_m(t_metal_um),
            contact_resistivity: units::mohm_cm2_to_ohm_m2(contact_mohm_cm2),
            material,
            max_length_hint: units::cm_to_m(max_length_hint_cm),
        };
        collector.validate()?;
        Ok(collector)
    }

    pub fn validate(&self) -> Result<()> {
        if self.metal_resistivity < 0.0 || self.contact_resistivity < 0.0 {
            return Err(Error::invalid("collector resistivities must be non-negative"));
        }
        if !(self.metal_thickness > 0.0) {
            return Err(Error::invalid("collector thickness must be positive"));
        }
        if !(self.max_length_hint > 0.0) {
            return Err(Error::invalid("length hint must be positive"));
        }
        Ok(())
    }

    /// 2 µm electroplated gold, length limit ~1 cm.
    pub fn gold_film() -> Self {
        CollectorSpec::from_practical(2.44, 2.0, 4.0, CollectorMaterial::GoldFilm, 1.0)
            .expect("gold film values are valid")
    }

    /// 30 µm copper in printed circuit board technology, length limit ~5 cm.
    pub fn copper_pcb() -> Self {
        CollectorSpec::from_practical(1.72, 30.0, 4.0, CollectorMaterial::CopperPcb, 5.0)
            .expect("copper PCB values are valid")
    }

    /// 150 µm gold-plated stainless steel mesh as an equivalent 75 µm solid
    /// layer, length limit ~2 cm.
    pub fn steel_mesh() -> Self {
        CollectorSpec::from_practical(72.0, 75.0, 4.0, CollectorMaterial::SteelMesh, 2.0)
            .expect("steel mesh values are valid")
    }
}

/// A complete electrode-side description: geometry plus conductive stack plus
/// collector. The same struct serves anode and cathode.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellPreset {
    pub name: String,
    pub geometry: CellGeometry,
    /// Conductive layers between reaction zone and collector: catalyst, plus
    /// the GDL when present.
    pub stack: Vec<LayerSpec>,
    pub collector: CollectorSpec,
}

impl CellPreset {
    fn new(name: &str, geometry: CellGeometry, collector: CollectorSpec) -> Self {
        let mut stack = vec![LayerSpec::catalyst()];
        if geometry.has_gdl {
            stack.push(LayerSpec::gdl());
        }
        CellPreset {
            name: String::from(name),
            geometry,
            stack,
            collector,
        }
    }
}

/// The three investigated cell types.
///
/// - `DF`: thin film on foil, 0.5 cm², fine pitch (40–800 µm fabricated;
///   400 µm default, 70 % opening), no GDL, gold collectors.
/// - `PCB`: printed circuit board, 2 cm², 600 µm pitch, 60 % opening,
///   no GDL, copper collectors.
/// - `PG`: printed circuit board with GDL, 10 cm², 500–2000 µm pitch
///   (1000 µm default, 60 % opening), steel mesh collectors.
pub fn builtin_cell_presets() -> Vec<CellPreset> {
    let df = CellPreset::new(
        "DF",
        CellGeometry::from_practical(0.5, 400.0, 280.0, 0.7, false)
            .expect("DF geometry is valid"),
        CollectorSpec::gold_film(),
    );
    let pcb = CellPreset::new(
        "PCB",
        CellGeometry::from_practical(2.0, 600.0, 360.0, 1.4, false)
            .expect("PCB geometry is valid"),
        CollectorSpec::copper_pcb(),
    );
    let pg = CellPreset::new(
        "PG",
        CellGeometry::from_practical(10.0, 1000.0, 600.0, 2.0, true)
            .expect("PG geometry is valid"),
        CollectorSpec::steel_mesh(),
    );
    vec![df, pcb, pg]
}

/// Look up a builtin preset by name (case-insensitive).
pub fn preset_by_name(name: &str) -> Option<CellPreset> {
    builtin_cell_presets()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}
