//! Windowed force variance from Wick contractions.
//!
//! Write the force operator as `F = Σ_{μν} M_μν A_μ A_ν` with
//! `A_μ = a_μ − a_μ†` and, for one wall at reduced units,
//! `M_μν = −(π/V) √(k_μ k_ν) ∂_d[f_μ(r_A)·f_ν(r_A)]`. Free evolution turns
//! each `A_μ A_ν` into terms oscillating at `±ω_μ ± ω_ν`, and averaging
//! against the Lorentzian response multiplies each by `e^{−|Ω|T}`. On the
//! vacuum only the `a†a†` part of the time-averaged operator creates a
//! state orthogonal to `|0⟩`, so
//!
//! ```text
//! ⟨F̄²⟩ − ⟨F̄⟩² = Σ_{μνρσ} M_μν M_ρσ g_μν g_ρσ ⟨a_ν a_μ a_ρ† a_σ†⟩
//!              = 2 Σ_{μν} M_μν² e^{−2(ω_μ+ω_ν)T}
//! ```
//!
//! using the two pairings of the quartic expectation (see [`super::wick`]).
//! Each time-averaged factor contributes one `e^{−ΩT}`, so the pair carries
//! `e^{−2ΩT}` with `Ω = ω_μ + ω_ν`.
//!
//! In the continuum the polarization and transverse sums give
//! `Σ_{jj'} (∂_d f·f')² → 4 Σ_a P_aa(k̂) P_aa(k̂') D_a²` with
//! `D_x = D_y = ∂_d[sin(k_z d) sin(k_z' d)]` and
//! `D_z = ∂_d[cos(k_z d) cos(k_z' d)]`, and the variance becomes
//!
//! ```text
//! Var = (2/π⁴) ∫∫ d³k d³k' k k' K(k, k') e^{−2(k+k')cT}
//! ```
//!
//! with `K = 4 Σ_a P_aa P'_aa D_a²` ([`pair_kernel`]). Because `D_a²` is a
//! sum of products of single-mode factors, the nested quadrature of the
//! double integral is evaluated as a sum of products of single-mode
//! quadrature sums; the Monte Carlo path samples pairs and evaluates the
//! kernel directly.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::grid::{ModeSumGrid, MonteCarlo};
use super::quadrature::{panels, CompensatedSum, GaussRule};
use super::report::{OracleReport, TracePoint};
use crate::cavity_modes::{polarization_sum, PolarizationTensor};
use crate::error::{ensure_positive, Error, Result};
use crate::fluctuation::{self, window_attenuation, MeasurementWindow};
use crate::quantities::{AtomSpec, NaturalScales};

/// A quadrature node in the wavevector octant.
#[derive(Debug, Clone, Copy)]
pub struct SpectralNode {
    pub k: f64,
    pub khat: [f64; 3],
    /// Quadrature weight including the `k²` Jacobian.
    pub weight: f64,
}

impl SpectralNode {
    fn projector(&self) -> PolarizationTensor {
        polarization_sum(self.khat).expect("unit vector")
    }

    fn kz(&self) -> f64 {
        self.k * self.khat[2]
    }
}

/// `4 Σ_a P_aa(μ) P_aa(ν) D_a²` at atom distance `d`.
pub fn pair_kernel(mu: &SpectralNode, nu: &SpectralNode, d: f64) -> f64 {
    let (kz, kz2) = (mu.kz(), nu.kz());
    let (s1, c1) = (kz * d).sin_cos();
    let (s2, c2) = (kz2 * d).sin_cos();
    let d_xy = kz * c1 * s2 + kz2 * s1 * c2;
    let d_z = -(kz * s1 * c2 + kz2 * c1 * s2);
    let p = mu.projector().diagonal();
    let q = nu.projector().diagonal();
    4.0 * ((p[0] * q[0] + p[1] * q[1]) * d_xy * d_xy + p[2] * q[2] * d_z * d_z)
}

/// Integrand of the pair integral (reduced units), excluding `2/π⁴`.
pub fn pair_integrand(
    mu: &SpectralNode,
    nu: &SpectralNode,
    d: f64,
    window: &MeasurementWindow,
) -> f64 {
    let g = window_attenuation(window, mu.k + nu.k).expect("nonnegative frequency");
    mu.k * nu.k * pair_kernel(mu, nu, d) * g * g
}

/// Nested-quadrature nodes over the octant for unit distance and window
/// length `tau`, grouped by radial panel.
pub fn octant_nodes(tau: f64, grid: &ModeSumGrid) -> Vec<Vec<SpectralNode>> {
    let radial = GaussRule::new(grid.n_radial);
    let angular = GaussRule::new(grid.n_angular);
    let azimuth: Vec<(f64, f64, f64)> = angular
        .on(0.0, FRAC_PI_2)
        .map(|(p, w)| (p.cos(), p.sin(), w))
        .collect();
    let cutoff = variance_cutoff(tau, grid);
    let width = (PI / 4.0).min(0.5 / tau);
    panels(0.0, cutoff, width)
        .into_iter()
        .map(|(a, b)| {
            let mut nodes = Vec::new();
            for (k, wk) in radial.on(a, b) {
                let n_u = (2.0 * k / PI).ceil() as usize + 1;
                for (u, wu) in angular.composite(0.0, 1.0, n_u) {
                    let sin_t = (1.0 - u * u).max(0.0).sqrt();
                    for &(cp, sp, wp) in &azimuth {
                        nodes.push(SpectralNode {
                            k,
                            khat: [sin_t * cp, sin_t * sp, u],
                            weight: wk * wu * wp * k * k,
                        });
                    }
                }
            }
            nodes
        })
        .collect()
}

fn variance_cutoff(tau: f64, grid: &ModeSumGrid) -> f64 {
    let auto = 25.0 / tau;
    grid.k_max.map_or(auto, |k| k.min(auto))
}

/// Single-mode quadrature sums `X_a[·]` that the pair sum factors into.
#[derive(Debug, Clone, Copy, Default)]
struct ModeSums {
    /// Per axis: kz²c², s², kz·s·c, kz²s², c².
    x: [[f64; 5]; 3],
}

impl ModeSums {
    fn add(&mut self, other: &ModeSums) {
        for a in 0..3 {
            for j in 0..5 {
                self.x[a][j] += other.x[a][j];
            }
        }
    }

    /// `Σ_{μν} w_μ w_ν k_μ k_ν K(μ, ν) g²` assembled from the factors.
    fn pair_sum(&self) -> f64 {
        let mut total = 0.0;
        for a in 0..2 {
            let x = &self.x[a];
            total += 2.0 * x[0] * x[1] + 2.0 * x[2] * x[2];
        }
        let z = &self.x[2];
        total += 2.0 * z[3] * z[4] + 2.0 * z[2] * z[2];
        4.0 * total
    }
}

fn mode_sums(nodes: &[SpectralNode], d: f64, window: &MeasurementWindow) -> ModeSums {
    let mut acc = [[CompensatedSum::default(); 5]; 3];
    for n in nodes {
        let g = window_attenuation(window, n.k).expect("nonnegative frequency");
        let rho = n.weight * n.k * g * g;
        let kz = n.kz();
        let (s, c) = (kz * d).sin_cos();
        let f = [kz * kz * c * c, s * s, kz * s * c, kz * kz * s * s, c * c];
        let p = n.projector().diagonal();
        for a in 0..3 {
            for j in 0..5 {
                acc[a][j].add(rho * p[a] * f[j]);
            }
        }
    }
    ModeSums {
        x: acc.map(|row| row.map(|s| s.value())),
    }
}

/// Reduced variance (`ħ = c = α = 1`, `d = 1`) by nested quadrature, with
/// the partial results after each quarter of the radial range.
pub fn variance_quadrature_reduced(tau: f64, grid: &ModeSumGrid) -> (f64, Vec<TracePoint>) {
    let window = MeasurementWindow::lorentzian(tau).expect("positive tau");
    let groups = octant_nodes(tau, grid);
    let sums: Vec<ModeSums> = groups
        .par_iter()
        .map(|nodes| mode_sums(nodes, 1.0, &window))
        .collect();
    let cutoff = variance_cutoff(tau, grid);
    let n = sums.len();
    let mut acc = ModeSums::default();
    let mut trace = Vec::new();
    for (i, s) in sums.iter().enumerate() {
        acc.add(s);
        let done = i + 1;
        if done * 4 / n != i * 4 / n || done == n {
            let var = 2.0 / PI.powi(4) * acc.pair_sum();
            trace.push(TracePoint {
                refinement: cutoff * done as f64 / n as f64,
                value: var,
            });
        }
    }
    trace.dedup_by(|a, b| a.refinement == b.refinement);
    let var = 2.0 / PI.powi(4) * acc.pair_sum();
    (var, trace)
}

/// Direct `O(N²)` double sum over the nodes; only practical for coarse grids.
pub fn variance_brute_reduced(tau: f64, grid: &ModeSumGrid) -> f64 {
    let window = MeasurementWindow::lorentzian(tau).expect("positive tau");
    let nodes: Vec<SpectralNode> = octant_nodes(tau, grid).into_iter().flatten().collect();
    let rows: Vec<f64> = nodes
        .par_iter()
        .map(|mu| {
            nodes
                .iter()
                .map(|nu| mu.weight * nu.weight * pair_integrand(mu, nu, 1.0, &window))
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    2.0 / PI.powi(4) * rows.into_iter().collect::<CompensatedSum>().value()
}

const MC_BLOCK: u64 = 1 << 15;
const MC_SHAPE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

fn sample_node(rng: &mut ChaCha8Rng, gamma: &Gamma<f64>) -> SpectralNode {
    let k = gamma.sample(rng);
    let u: f64 = rng.random();
    let phi = FRAC_PI_2 * rng.random::<f64>();
    let sin_t = (1.0 - u * u).max(0.0).sqrt();
    SpectralNode {
        k,
        khat: [sin_t * phi.cos(), sin_t * phi.sin(), u],
        weight: 1.0,
    }
}

/// Sampling density of [`sample_node`] with respect to `dk du dφ`.
fn node_density(k: f64, rate: f64) -> f64 {
    // Gamma(5, rate) × U(0, 1) × U(0, π/2)
    rate.powi(5) * k.powi(4) * (-rate * k).exp() / 24.0 * (2.0 / PI)
}

/// Reduced variance by importance-sampled Monte Carlo over mode pairs.
/// Blocks draw from independent ChaCha streams and are reduced in block
/// order, so the estimate depends only on the seed and the sample count.
pub fn variance_monte_carlo_reduced(tau: f64, mc: &MonteCarlo) -> (McEstimate, Vec<TracePoint>) {
    let window = MeasurementWindow::lorentzian(tau).expect("positive tau");
    let rate = 2.0 * tau;
    let gamma = Gamma::new(MC_SHAPE, 1.0 / rate).expect("valid gamma");
    let blocks = mc.samples.div_ceil(MC_BLOCK);
    let partial: Vec<(f64, f64, u64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(b);
            let n = MC_BLOCK.min(mc.samples - b * MC_BLOCK);
            let mut sum = CompensatedSum::default();
            let mut sum_sq = CompensatedSum::default();
            for _ in 0..n {
                let mu = sample_node(&mut rng, &gamma);
                let nu = sample_node(&mut rng, &gamma);
                let jac = mu.k * mu.k * nu.k * nu.k;
                let f = jac * pair_integrand(&mu, &nu, 1.0, &window)
                    / (node_density(mu.k, rate) * node_density(nu.k, rate));
                sum.add(f);
                sum_sq.add(f * f);
            }
            (sum.value(), sum_sq.value(), n)
        })
        .collect();

    let scale = 2.0 / PI.powi(4);
    let mut s = CompensatedSum::default();
    let mut s2 = CompensatedSum::default();
    let mut count = 0u64;
    let mut trace = Vec::new();
    for (a, b, n) in partial {
        s.add(a);
        s2.add(b);
        count += n;
        trace.push(TracePoint {
            refinement: count as f64,
            value: scale * s.value() / count as f64,
        });
    }
    let n = count as f64;
    let mean = s.value() / n;
    let var = (s2.value() / n - mean * mean).max(0.0);
    (
        McEstimate {
            mean: scale * mean,
            std_error: scale * (var / n).sqrt(),
        },
        trace,
    )
}

/// Standard deviation of the time-averaged single-wall force from the mode
/// pair integral, against the closed form.
pub fn variance_modesum(
    atom: &AtomSpec,
    d: f64,
    window: &MeasurementWindow,
    grid: &ModeSumGrid,
) -> Result<OracleReport> {
    ensure_positive("distance", d)?;
    grid.validate()?;
    let scale = NaturalScales::for_atom(atom, d)?.force_scale();
    let tau = window.light_length() / d;
    let closed = fluctuation::force_std_single_wall(atom, d, window)?;

    let (variance, uncertainty, trace, method) = match &grid.monte_carlo {
        None => {
            let (v, trace) = variance_quadrature_reduced(tau, grid);
            let unc = trace
                .iter()
                .rev()
                .nth(1)
                .map_or(f64::INFINITY, |p| (v - p.value).abs());
            (v, unc, trace, "wick_nested_quadrature")
        }
        Some(mc) => {
            let (est, trace) = variance_monte_carlo_reduced(tau, mc);
            let relative_se = 0.5 * est.std_error / est.mean;
            if relative_se.is_nan() || relative_se > 0.5 * mc.tolerance {
                return Err(Error::MonteCarloTooNoisy {
                    relative_se,
                    tolerance: mc.tolerance,
                    samples: mc.samples,
                });
            }
            (est.mean, est.std_error, trace, "wick_monte_carlo")
        }
    };
    let std = variance.sqrt();
    let trace = trace
        .into_iter()
        .map(|p| TracePoint {
            refinement: p.refinement,
            value: p.value.max(0.0).sqrt() * scale,
        })
        .collect();
    Ok(OracleReport::new(
        "single_wall_force_std",
        "N",
        method,
        std * scale,
        closed,
        0.5 * uncertainty / std * scale,
        trace,
        Vec::new(),
    ))
}
