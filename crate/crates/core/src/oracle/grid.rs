use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seeded Monte Carlo configuration for the pair integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    /// Number of sampled mode pairs.
    pub samples: u64,
    pub seed: u64,
    /// Target relative accuracy of the standard deviation; the run is
    /// rejected when its standard error exceeds half of this.
    pub tolerance: f64,
}

/// Discretization of the spectral integrals.
///
/// All wavenumbers and damping lengths are in reduced units: multiples of
/// `1/ℓ` and `ℓ` respectively, where `ℓ` is the atom-wall distance for one
/// wall and the wall gap for two walls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSumGrid {
    /// Hard radial cutoff. `None` picks one from the damping (`50/η`) or
    /// from the measurement window.
    pub k_max: Option<f64>,
    /// Gauss-Legendre nodes per radial panel.
    pub n_radial: usize,
    /// Gauss-Legendre nodes per angular panel (polar and azimuthal).
    pub n_angular: usize,
    /// Abel damping lengths, strictly decreasing.
    pub eta_schedule: Vec<f64>,
    /// Replaces the nested quadrature of the variance by Monte Carlo.
    pub monte_carlo: Option<MonteCarlo>,
}

impl ModeSumGrid {
    /// Defaults for the single-wall energy and force.
    pub fn single_wall() -> Self {
        Self {
            k_max: None,
            n_radial: 16,
            n_angular: 12,
            eta_schedule: vec![0.8, 0.4, 0.2, 0.1],
            monte_carlo: None,
        }
    }

    /// Defaults for the two-wall force.
    pub fn two_walls() -> Self {
        Self {
            k_max: None,
            n_radial: 16,
            n_angular: 8,
            eta_schedule: vec![0.2, 0.1, 0.05, 0.025],
            monte_carlo: None,
        }
    }

    /// Defaults for the windowed variance (no damping needed).
    pub fn variance() -> Self {
        Self {
            k_max: None,
            n_radial: 16,
            n_angular: 12,
            eta_schedule: vec![1.0],
            monte_carlo: None,
        }
    }

    pub fn with_monte_carlo(mut self, samples: u64, seed: u64, tolerance: f64) -> Self {
        self.monte_carlo = Some(MonteCarlo {
            samples,
            seed,
            tolerance,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.k_max {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "k_max must be > 0 (got {k:e})"
                )));
            }
        }
        if self.n_radial < 8 || self.n_angular < 8 {
            return Err(Error::InvalidInput(format!(
                "node counts must be >= 8 (got radial {}, angular {})",
                self.n_radial, self.n_angular
            )));
        }
        if self.eta_schedule.is_empty()
            || self
                .eta_schedule
                .iter()
                .any(|e| !(*e > 0.0 && e.is_finite()))
            || self.eta_schedule.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::InvalidInput(format!(
                "eta schedule must be positive and strictly decreasing: {:?}",
                self.eta_schedule
            )));
        }
        if let Some(mc) = self.monte_carlo {
            if mc.samples < 1024 || mc.tolerance.is_nan() || mc.tolerance <= 0.0 {
                return Err(Error::InvalidInput(
                    "Monte Carlo needs >= 1024 samples and a positive tolerance".into(),
                ));
            }
        }
        Ok(())
    }

    /// Radial cutoff used with damping `eta`.
    pub(crate) fn damped_cutoff(&self, eta: f64) -> f64 {
        let auto = 50.0 / eta;
        self.k_max.map_or(auto, |k| k.min(auto))
    }
}
