//! Brute-force spectral evaluation of the mean force and the windowed force
//! variance, used to check the closed forms.
//!
//! Mean quantities are continuum mode integrals with an Abel factor
//! `e^{−ηk}`, extrapolated to `η → 0`. The variance is the vacuum
//! expectation of the squared time-averaged force operator, reduced by Wick
//! contractions to a double integral over mode pairs; see [`variance`].

mod grid;
mod mean;
pub mod quadrature;
mod report;
pub mod richardson;
pub mod variance;
pub mod wick;

pub use grid::{ModeSumGrid, MonteCarlo};
pub use mean::{mean_energy_modesum, mean_force_modesum, two_wall_force_modesum};
pub use report::{OracleReport, TracePoint};
pub use variance::variance_modesum;
