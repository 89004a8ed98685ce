//! Embodied-carbon estimation for monolithic and chiplet-based VLSI systems.
//!
//! The library models the cradle-to-gate carbon footprint of an integrated
//! circuit as the sum of three contributions:
//!
//! * **Manufacturing** — per-die fabrication carbon, driven by die area,
//!   defect-limited yield, and per-node energy/gas/material intensities
//!   ([`manufacturing`]).
//! * **Design** — amortized CPU time of synthesis/place-and-route,
//!   analysis, and verification converted to carbon ([`design`]).
//! * **Heterogeneous integration** — package manufacturing (fan-out RDL,
//!   silicon bridges, passive or active interposers) plus die-to-die
//!   communication overheads ([`packaging`], with geometry from
//!   [`floorplan`]).
//!
//! [`system`] ties the pieces together into per-configuration reports and a
//! design-space sweep over technology nodes, chiplet counts, and package
//! architectures. [`techdb`] holds the per-node parameter database all other
//! modules read from. [`cli`] wraps everything in a command-line tool.
//!
//! Unit conventions, used everywhere without exception: areas are mm²
//! (converted to cm² only where a per-cm² intensity is applied), carbon is
//! grams of CO₂-equivalent, energy is kWh, and time is CPU-hours.

pub mod cli;
pub mod design;
pub mod error;
pub mod floorplan;
pub mod manufacturing;
pub mod packaging;
pub mod system;
pub mod techdb;

pub use error::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
