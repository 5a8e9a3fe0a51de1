//! Discrete phase-shift design for reconfigurable intelligent surfaces.
//!
//! A [`Scenario`] describes a surface, a Tx/Rx placement and the radio link.
//! The [`quantization`] module turns the ideal continuous shifts into q-bit
//! shifts by searching the quantization threshold, and [`analysis`] runs the
//! parameter sweeps built on top of it.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod quantization;
pub mod radiation;
pub mod scenario;

pub use analysis::{GridRange, Method, SweepAxis, SweepRow, SweepSpec};
pub use channel::PhaseMatrix;
pub use error::{Error, Result};
pub use geometry::{CellGrid, Placement, Point3, RisPanel};
pub use quantization::{QuantizationResult, ShiftMatrix};
pub use radiation::RadioConfig;
pub use scenario::{presets, Link, Scenario};
