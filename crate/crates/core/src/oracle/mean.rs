//! Abel-regularized continuum mode integrals for the mean energy and force.
//!
//! For one wall the atom sits on the axis at `z = d`. With the transverse
//! box size taken to infinity, the mode sum becomes
//! `Σ_k → V/π³ ∫_octant d³k` and the polarization sum over the squared mode
//! functions becomes `Σ_a P_aa(k̂) S_a²(k_z d)` with the transverse-averaged
//! profiles of [`crate::cavity_modes::averaged_profile_sq`]. In reduced
//! units (`ħ = c = α = 1`, `d = 1`):
//!
//! ```text
//! E = −(1/π²) ∫ d³k k e^{−ηk} Σ_a P_aa [S_a² − 1]
//! F = +(1/π²) ∫ d³k k e^{−ηk} Σ_a P_aa ∂_d S_a²
//! ```
//!
//! The `−1` removes the distance-independent part (the value of `S_a²`
//! averaged over `d`). For two walls, `k_z = nπ/L` stays discrete and the
//! transverse plane becomes a continuum: `Σ → (1/(πL)) Σ_n ∫ d²k_⊥`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::grid::ModeSumGrid;
use super::quadrature::{panels, CompensatedSum, GaussRule};
use super::report::{OracleReport, TracePoint};
use super::richardson::extrapolate_even;
use crate::cavity_modes::{
    averaged_profile_sq, averaged_profile_sq_dz, polarization_sum, wall_phase, BoxSpec,
    PolarizationTensor,
};
use crate::error::{ensure_positive, Result};
use crate::mean_force::{self, Geometry};
use crate::quantities::{AtomSpec, NaturalScales};

/// A damped integral and the sum of the magnitudes of its contributions,
/// which sets the rounding floor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Damped {
    pub value: f64,
    pub magnitude: f64,
}

impl FromIterator<Damped> for Damped {
    fn from_iter<I: IntoIterator<Item = Damped>>(iter: I) -> Self {
        let mut v = CompensatedSum::default();
        let mut m = CompensatedSum::default();
        for d in iter {
            v.add(d.value);
            m.add(d.magnitude);
        }
        Damped {
            value: v.value(),
            magnitude: m.value(),
        }
    }
}

impl Damped {
    fn scaled(self, s: f64) -> Self {
        Damped {
            value: self.value * s,
            magnitude: self.magnitude * s.abs(),
        }
    }
}

/// `∫_octant d³k k e^{−ηk} g(k, k̂, P)` for the single-wall geometry at
/// `d = 1`, by nested composite Gauss-Legendre quadrature in `(k, cosθ, φ)`.
fn octant_integral<F>(eta: f64, grid: &ModeSumGrid, g: F) -> Damped
where
    F: Fn(f64, [f64; 3], &PolarizationTensor) -> f64 + Sync,
{
    let radial = GaussRule::new(grid.n_radial);
    let angular = GaussRule::new(grid.n_angular);
    let azimuth: Vec<(f64, f64, f64)> = angular
        .on(0.0, FRAC_PI_2)
        .map(|(p, w)| (p.cos(), p.sin(), w))
        .collect();
    let cutoff = grid.damped_cutoff(eta);

    let partials: Vec<Damped> = panels(0.0, cutoff, PI / 4.0)
        .into_par_iter()
        .map(|(a, b)| {
            let mut acc = CompensatedSum::default();
            let mut mag = CompensatedSum::default();
            for (k, wk) in radial.on(a, b) {
                let radial_weight = wk * k * k * k * (-eta * k).exp();
                // cos(2k·u) has k/π periods on u ∈ [0, 1]
                let n_u = (2.0 * k / PI).ceil() as usize + 1;
                for (u, wu) in angular.composite(0.0, 1.0, n_u) {
                    let sin_t = (1.0 - u * u).max(0.0).sqrt();
                    for &(cp, sp, wp) in &azimuth {
                        let khat = [sin_t * cp, sin_t * sp, u];
                        let p = polarization_sum(khat).expect("unit vector");
                        let t = radial_weight * wu * wp * g(k, khat, &p);
                        acc.add(t);
                        mag.add(t.abs());
                    }
                }
            }
            Damped {
                value: acc.value(),
                magnitude: mag.value(),
            }
        })
        .collect();
    partials.into_iter().collect()
}

pub(crate) fn energy_reduced(eta: f64, grid: &ModeSumGrid) -> Damped {
    let cavity = BoxSpec::SingleWall {
        side: f64::INFINITY,
    };
    let v = octant_integral(eta, grid, |k, khat, p| {
        let s = averaged_profile_sq(wall_phase(&cavity, k * khat[2], 1.0));
        let diag = p.diagonal();
        (0..3).map(|a| diag[a] * (s[a] - 1.0)).sum::<f64>()
    });
    v.scaled(-1.0 / (PI * PI))
}

pub(crate) fn force_reduced(eta: f64, grid: &ModeSumGrid) -> Damped {
    let cavity = BoxSpec::SingleWall {
        side: f64::INFINITY,
    };
    let v = octant_integral(eta, grid, |k, khat, p| {
        let kz = k * khat[2];
        let s = averaged_profile_sq_dz(wall_phase(&cavity, kz, 1.0), kz);
        let diag = p.diagonal();
        (0..3).map(|a| diag[a] * s[a]).sum::<f64>()
    });
    v.scaled(1.0 / (PI * PI))
}

/// Two-wall force at gap 1 and offset `offset` (reduced units).
pub(crate) fn two_wall_force_reduced(offset: f64, eta: f64, grid: &ModeSumGrid) -> Damped {
    let cavity = BoxSpec::TwoWalls {
        transverse: f64::INFINITY,
        gap: 1.0,
    };
    let radial = GaussRule::new(grid.n_radial);
    let azimuth: Vec<(f64, f64, f64)> = GaussRule::new(grid.n_angular)
        .on(0.0, FRAC_PI_2)
        .map(|(p, w)| (p.cos(), p.sin(), w))
        .collect();
    let cutoff = grid.damped_cutoff(eta);
    let n_max = (cutoff / PI).floor() as u64;

    // n = 0 carries no z dependence and drops out of the force
    let partials: Vec<Damped> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let kz = n as f64 * PI;
            let ds = averaged_profile_sq_dz(wall_phase(&cavity, kz, offset), kz);
            let mut acc = CompensatedSum::default();
            let mut mag = CompensatedSum::default();
            // d²k_⊥ = q dq dφ = k dk dφ
            for (a, b) in panels(kz, cutoff.max(kz), 1.0 / eta) {
                for (k, wk) in radial.on(a, b) {
                    let q = (k * k - kz * kz).max(0.0).sqrt();
                    let weight = wk * k * k * (-eta * k).exp();
                    for &(cp, sp, wp) in &azimuth {
                        let p = polarization_sum([q * cp, q * sp, kz]).expect("nonzero k");
                        let diag = p.diagonal();
                        let g: f64 = (0..3).map(|i| diag[i] * ds[i]).sum();
                        acc.add(weight * wp * g);
                        // envelope with |sin| → 1, so the floor survives at the midplane
                        mag.add(weight * wp * 2.0 * kz * diag.iter().sum::<f64>());
                    }
                }
            }
            Damped {
                value: acc.value(),
                magnitude: mag.value(),
            }
        })
        .collect();
    partials.into_iter().collect::<Damped>().scaled(1.0 / PI)
}

fn run_schedule<F>(grid: &ModeSumGrid, eval: F) -> Result<(f64, f64, Vec<TracePoint>, Vec<f64>)>
where
    F: Fn(f64) -> Damped,
{
    let damped: Vec<Damped> = grid.eta_schedule.iter().map(|&eta| eval(eta)).collect();
    let values: Vec<f64> = damped.iter().map(|d| d.value).collect();
    let floor = damped.iter().map(|d| d.magnitude).fold(0.0, f64::max) * 1e3 * f64::EPSILON;
    let x = extrapolate_even(&grid.eta_schedule, &values, floor)?;
    let trace = grid
        .eta_schedule
        .iter()
        .zip(&values)
        .map(|(&refinement, &value)| TracePoint { refinement, value })
        .collect();
    Ok((x.value, x.uncertainty, trace, x.diagonal))
}

fn scale_trace(trace: &mut [TracePoint], diag: &mut [f64], scale: f64) {
    for t in trace.iter_mut() {
        t.value *= scale;
    }
    for d in diag.iter_mut() {
        *d *= scale;
    }
}

/// Distance-dependent vacuum interaction energy of an atom at distance `d`
/// from one wall, checked against the closed form.
pub fn mean_energy_modesum(atom: &AtomSpec, d: f64, grid: &ModeSumGrid) -> Result<OracleReport> {
    ensure_positive("distance", d)?;
    grid.validate()?;
    let scale = NaturalScales::for_atom(atom, d)?.energy_scale();
    let (v, unc, mut trace, mut diag) = run_schedule(grid, |eta| energy_reduced(eta, grid))?;
    scale_trace(&mut trace, &mut diag, scale);
    Ok(OracleReport::new(
        "single_wall_energy",
        "J",
        "abel_modesum",
        v * scale,
        mean_force::energy_single_wall(atom, d)?,
        unc * scale,
        trace,
        diag,
    ))
}

pub fn mean_force_modesum(atom: &AtomSpec, d: f64, grid: &ModeSumGrid) -> Result<OracleReport> {
    ensure_positive("distance", d)?;
    grid.validate()?;
    let scale = NaturalScales::for_atom(atom, d)?.force_scale();
    let (v, unc, mut trace, mut diag) = run_schedule(grid, |eta| force_reduced(eta, grid))?;
    scale_trace(&mut trace, &mut diag, scale);
    Ok(OracleReport::new(
        "single_wall_mean_force",
        "N",
        "abel_modesum",
        v * scale,
        mean_force::mean_force_single_wall(atom, d)?.value,
        unc * scale,
        trace,
        diag,
    ))
}

pub fn two_wall_force_modesum(
    atom: &AtomSpec,
    gap: f64,
    offset: f64,
    grid: &ModeSumGrid,
) -> Result<OracleReport> {
    Geometry::TwoWalls { gap, offset }.validate()?;
    grid.validate()?;
    let scale = NaturalScales::for_atom(atom, gap)?.force_scale();
    let rel = offset / gap;
    let (v, unc, mut trace, mut diag) =
        run_schedule(grid, |eta| two_wall_force_reduced(rel, eta, grid))?;
    scale_trace(&mut trace, &mut diag, scale);
    Ok(OracleReport::new(
        "two_wall_mean_force",
        "N",
        "abel_modesum",
        v * scale,
        mean_force::mean_force_two_walls(atom, gap, offset)?.value,
        unc * scale,
        trace,
        diag,
    ))
}
