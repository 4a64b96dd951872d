//! Standing-wave modes of the conducting boxes used to model one wall and two
//! parallel walls.
//!
//! Single wall: cube `-L/2 < x, y < L/2`, `0 < z < L`, with the wall at
//! `z = 0` once `L → ∞`. Two walls: `-L₁/2 < x, y < L₁/2`, `-L/2 < z < L/2`,
//! walls at `z = ±L/2` once `L₁ → ∞`.
//!
//! Bilinears in the polarization vectors are always contracted through
//! [`polarization_sum`]; explicit vectors are only built by
//! [`polarization_basis`] for evaluating a single mode function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::quantities::CODATA;

/// Default cap on the number of modes `enumerate_modes` will materialize.
pub const DEFAULT_MODE_BUDGET: u64 = 20_000_000;

const SQRT8: f64 = 2.828_427_124_746_190_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    First = 1,
    Second = 2,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::First, Polarization::Second];
}

/// A wavevector (positive octant) together with a polarization label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndex {
    /// rad/m, all components ≥ 0.
    pub k: [f64; 3],
    pub polarization: Polarization,
    /// Angular frequency `c|k|`, rad/s.
    pub omega: f64,
}

impl ModeIndex {
    pub fn new(k: [f64; 3], polarization: Polarization) -> Result<Self> {
        if k.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidInput(format!(
                "wavevector components must be finite and >= 0, got {k:?}"
            )));
        }
        Ok(Self {
            k,
            polarization,
            omega: CODATA.c * norm(k),
        })
    }

    pub fn magnitude(&self) -> f64 {
        norm(self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoxSpec {
    /// Cube of side `side`; the wall is the `z = 0` face.
    SingleWall { side: f64 },
    /// Square cross-section `transverse` × `transverse`, wall gap `gap`.
    TwoWalls { transverse: f64, gap: f64 },
}

impl BoxSpec {
    pub fn single_wall(side: f64) -> Result<Self> {
        ensure_positive("box side", side)?;
        Ok(BoxSpec::SingleWall { side })
    }

    pub fn two_walls(transverse: f64, gap: f64) -> Result<Self> {
        ensure_positive("transverse side", transverse)?;
        ensure_positive("wall gap", gap)?;
        Ok(BoxSpec::TwoWalls { transverse, gap })
    }

    pub fn volume(&self) -> f64 {
        match *self {
            BoxSpec::SingleWall { side } => side.powi(3),
            BoxSpec::TwoWalls { transverse, gap } => transverse * transverse * gap,
        }
    }

    /// Box lengths along x, y, z.
    fn sides(&self) -> [f64; 3] {
        match *self {
            BoxSpec::SingleWall { side } => [side; 3],
            BoxSpec::TwoWalls { transverse, gap } => [transverse, transverse, gap],
        }
    }
}

/// `Σ_j (e_kj)_a (e_kj)_b = δ_ab − k̂_a k̂_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationTensor(pub [[f64; 3]; 3]);

impl PolarizationTensor {
    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.0[0][0], self.0[1][1], self.0[2][2]]
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [0, 1, 2].map(|a| m[a][0] * v[0] + m[a][1] * v[1] + m[a][2] * v[2])
    }

    pub fn compose(&self, other: &PolarizationTensor) -> PolarizationTensor {
        let mut out = [[0.0; 3]; 3];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|c| self.0[a][c] * other.0[c][b]).sum();
            }
        }
        PolarizationTensor(out)
    }
}

pub fn polarization_sum(k: [f64; 3]) -> Result<PolarizationTensor> {
    let n = norm(k);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroWavevector);
    }
    let u = k.map(|c| c / n);
    let mut p = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            p[a][b] = f64::from(u8::from(a == b)) - u[a] * u[b];
        }
    }
    Ok(PolarizationTensor(p))
}

/// A right-handed transverse basis `(e₁, e₂)` for `k`. `e₁ ∝ ẑ × k̂`, or x̂
/// when `k ∥ ẑ`.
pub fn polarization_basis(k: [f64; 3]) -> Result<[[f64; 3]; 2]> {
    let n = norm(k);
    if n == 0.0 {
        return Err(Error::ZeroWavevector);
    }
    let u = k.map(|c| c / n);
    let zx = cross([0.0, 0.0, 1.0], u);
    let e1 = if norm(zx) < 1e-12 {
        [1.0, 0.0, 0.0]
    } else {
        let m = norm(zx);
        zx.map(|c| c / m)
    };
    Ok([e1, cross(u, e1)])
}

fn polarization_vector(mode: &ModeIndex) -> Result<[f64; 3]> {
    let [e1, e2] = polarization_basis(mode.k)?;
    Ok(match mode.polarization {
        Polarization::First => e1,
        Polarization::Second => e2,
    })
}

/// Evaluates a mode function given the phases along each axis.
fn mode_vector(e: [f64; 3], k: [f64; 3], shifted: [f64; 3]) -> [f64; 3] {
    let (sx, cx) = (k[0] * shifted[0]).sin_cos();
    let (sy, cy) = (k[1] * shifted[1]).sin_cos();
    let (sz, cz) = (k[2] * shifted[2]).sin_cos();
    [
        SQRT8 * e[0] * cx * sy * sz,
        SQRT8 * e[1] * sx * cy * sz,
        SQRT8 * e[2] * sx * sy * cz,
    ]
}

pub fn mode_function_single_wall(
    mode: &ModeIndex,
    r: [f64; 3],
    cavity: &BoxSpec,
) -> Result<[f64; 3]> {
    let BoxSpec::SingleWall { side } = *cavity else {
        return Err(Error::GeometryMismatch(
            "single-wall mode function needs a single-wall box",
        ));
    };
    let h = side / 2.0;
    if r[0].abs() > h || r[1].abs() > h || r[2] < 0.0 || r[2] > side {
        return Err(Error::OutsideBox { position: r });
    }
    let e = polarization_vector(mode)?;
    Ok(mode_vector(e, mode.k, [r[0] + h, r[1] + h, r[2]]))
}

pub fn mode_function_two_walls(
    mode: &ModeIndex,
    r: [f64; 3],
    cavity: &BoxSpec,
) -> Result<[f64; 3]> {
    let BoxSpec::TwoWalls { transverse, gap } = *cavity else {
        return Err(Error::GeometryMismatch(
            "two-wall mode function needs a two-wall box",
        ));
    };
    let h1 = transverse / 2.0;
    let h = gap / 2.0;
    if r[0].abs() > h1 || r[1].abs() > h1 || r[2].abs() > h {
        return Err(Error::OutsideBox { position: r });
    }
    let e = polarization_vector(mode)?;
    Ok(mode_vector(e, mode.k, [r[0] + h1, r[1] + h1, r[2] + h]))
}

/// Phase `k_z·ζ` of the wall-normal factor, where `ζ` is the distance from
/// the lower wall (`z` for one wall, `z + L/2` for two).
pub fn wall_phase(cavity: &BoxSpec, k_z: f64, z: f64) -> f64 {
    match *cavity {
        BoxSpec::SingleWall { .. } => k_z * z,
        BoxSpec::TwoWalls { gap, .. } => k_z * (z + gap / 2.0),
    }
}

/// Squared mode-function profile `|f_a|²/(e_a)²` on the axis `x = y = 0`,
/// averaged over the transverse phases, which is what survives when the
/// transverse box size goes to infinity: `[2 sin²φ, 2 sin²φ, 2 cos²φ]`.
pub fn averaged_profile_sq(phase: f64) -> [f64; 3] {
    let (s, c) = phase.sin_cos();
    [2.0 * s * s, 2.0 * s * s, 2.0 * c * c]
}

/// `∂/∂z` of [`averaged_profile_sq`] for wall-normal wavenumber `k_z`.
pub fn averaged_profile_sq_dz(phase: f64, k_z: f64) -> [f64; 3] {
    let t = 2.0 * k_z * (2.0 * phase).sin();
    [t, t, -t]
}

/// A discrete cavity mode with its integer lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityMode {
    pub indices: [u32; 3],
    pub mode: ModeIndex,
}

/// Expected number of modes with `|k| ≤ k_max`: octant volume over the
/// lattice cell, times two polarizations.
pub fn mode_count_estimate(cavity: &BoxSpec, k_max: f64) -> f64 {
    k_max.powi(3) * cavity.volume() / (3.0 * PI * PI)
}

/// All lattice modes with `|k| ≤ k_max`, excluding those with two or more
/// vanishing components, ordered by `(|k|, l, m, n, j)`.
pub fn enumerate_modes(cavity: &BoxSpec, k_max: f64, budget: u64) -> Result<Vec<CavityMode>> {
    ensure_positive("k_max", k_max)?;
    let estimate = mode_count_estimate(cavity, k_max);
    if estimate > budget as f64 {
        return Err(Error::ModeBudgetExceeded {
            estimate: estimate.ceil() as u64,
            budget,
        });
    }
    let steps = cavity.sides().map(|s| PI / s);
    let max_index = steps.map(|s| (k_max / s).floor() as u32);
    let k2max = k_max * k_max;

    let mut out = Vec::new();
    for l in 0..=max_index[0] {
        for m in 0..=max_index[1] {
            for n in 0..=max_index[2] {
                let zeros = [l, m, n].iter().filter(|&&i| i == 0).count();
                if zeros >= 2 {
                    continue;
                }
                let k = [
                    f64::from(l) * steps[0],
                    f64::from(m) * steps[1],
                    f64::from(n) * steps[2],
                ];
                if k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > k2max {
                    continue;
                }
                for pol in Polarization::BOTH {
                    out.push(CavityMode {
                        indices: [l, m, n],
                        mode: ModeIndex::new(k, pol)?,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.mode
            .magnitude()
            .total_cmp(&b.mode.magnitude())
            .then_with(|| a.indices.cmp(&b.indices))
            .then_with(|| a.mode.polarization.cmp(&b.mode.polarization))
    });
    Ok(out)
}

/// Splits an enumerated mode list into `parts` contiguous chunks whose
/// concatenation is the original order.
pub fn partition_modes(modes: &[CavityMode], parts: usize) -> Vec<&[CavityMode]> {
    let parts = parts.max(1);
    let size = modes.len().div_ceil(parts).max(1);
    modes.chunks(size).collect()
}

pub(crate) fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
