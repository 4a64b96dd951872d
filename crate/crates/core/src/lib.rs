//! Casimir-Polder mean force on a ground-state atom near perfectly
//! conducting walls, the fluctuation of the force averaged over a finite
//! measurement time, and brute-force spectral oracles for both.

pub mod cavity_modes;
pub mod error;
pub mod fluctuation;
pub mod mean_force;
pub mod oracle;
pub mod quantities;

pub use error::{Error, Result};
pub use fluctuation::{MeasurementWindow, Regime};
pub use mean_force::{ForceValue, Geometry};
pub use quantities::{AtomSpec, NaturalScales, UNIT_CONVENTION};
