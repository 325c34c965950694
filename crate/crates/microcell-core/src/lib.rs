//! Zero-dimensional models of planar passive PEM micro fuel cells coupled to a
//! galvanic on-demand hydrogen generator.
//!
//! The crate covers the desk-scale design questions of such systems:
//!
//! - [`resistance`]: closed-form electron-transport resistance of planar
//!   current collectors (in-plane, through-plane, contact, and metal terms).
//! - [`polarization`]: empirical cell voltage curve, ohmic-loss superposition,
//!   and the efficiency model `eta = eta_V * eta_F`.
//! - [`hydrogen`]: the Zn/H2O gas-generating cell with Faraday coupling
//!   between discharge current and hydrogen flow.
//! - [`system`]: the series fuel-cell/gas-cell circuit with bypass diode and
//!   bleed resistor, quasi-static operating points, transient load profiles,
//!   duty-cycle efficiency, and obtainable-energy tables.
//! - [`design`]: constraint checks, pitch optimization, and fuel-cell area
//!   sizing for a given mean load.
//!
//! All computation is in SI units internally; the [`units`] module holds the
//! conversions to the practical units used at the boundaries (cm², µm,
//! mA/cm², mΩ·cm², mW/cm², mAh).
//!
//! The crate is `no_std`-compatible (with `alloc`).

#![cfg_attr(not(feature = "std"), no_std)]
// Validation predicates are written `!(x > 0.0)` so NaN fails them while
// +inf stays admissible where a limit may be unbounded.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod constants;
pub mod design;
pub mod error;
pub mod geometry;
pub mod hydrogen;
pub mod polarization;
pub mod resistance;
pub mod system;
pub mod units;

mod numeric;

pub use error::{Error, Result};
