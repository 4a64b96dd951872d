//! Closed-form far-zone mean force and interaction energy.
//!
//! Sign conventions: for one wall the force is along `+z` (away from the
//! wall), so attraction is negative. For two walls at `z = ±L/2` the force
//! is along `+z` and the atom is pulled toward the nearer wall, so the sign
//! of the force equals the sign of the offset.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::quantities::{AtomSpec, NaturalScales};

/// Below this distance to a wall (as a fraction of the gap) the two-wall
/// force is evaluated from its single-wall asymptote.
pub const NEAR_WALL_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// Atom at distance `d` from a single wall.
    SingleWall { d: f64 },
    /// Walls at `z = ±gap/2`; `offset` is measured from the midplane.
    TwoWalls { gap: f64, offset: f64 },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::SingleWall { d } => ensure_positive("distance", d),
            Geometry::TwoWalls { gap, offset } => {
                ensure_positive("wall gap", gap)?;
                if !offset.is_finite() || offset.abs() >= gap / 2.0 {
                    return Err(Error::OffsetOutOfRange {
                        offset,
                        half_gap: gap / 2.0,
                    });
                }
                Ok(())
            }
        }
    }

    /// The length used to reduce this geometry to natural units.
    pub fn reference_length(&self) -> f64 {
        match *self {
            Geometry::SingleWall { d } => d,
            Geometry::TwoWalls { gap, .. } => gap,
        }
    }
}

/// A signed force with its log-magnitude, N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceValue {
    pub value: f64,
    /// `ln |value|`; absent when the force is exactly zero.
    pub log_magnitude: Option<f64>,
}

impl ForceValue {
    pub fn new(value: f64) -> Self {
        let log_magnitude = (value != 0.0).then(|| value.abs().ln());
        Self {
            value,
            log_magnitude,
        }
    }

    fn scaled(reduced: f64, scale: f64) -> Self {
        let value = reduced * scale;
        let log_magnitude = (reduced != 0.0).then(|| reduced.abs().ln() + scale.ln());
        Self {
            value,
            log_magnitude,
        }
    }
}

/// Closed forms in `ħ = c = α = 1` units.
pub mod reduced {
    use super::*;

    pub fn energy_single_wall(d: f64) -> f64 {
        -3.0 / (8.0 * PI * d.powi(4))
    }

    pub fn force_single_wall(d: f64) -> f64 {
        -3.0 / (2.0 * PI * d.powi(5))
    }

    /// Two-wall mean force for gap `l` and offset `d`, `|d| < l/2`.
    pub fn force_two_walls(l: f64, d: f64) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        let to_wall = l / 2.0 - d.abs();
        if to_wall < NEAR_WALL_FRACTION * l {
            return d.signum() * 3.0 / (2.0 * PI * to_wall.powi(5));
        }
        let t = PI * d / l;
        // cos(πd/L) = sin(π·(L/2 − |d|)/L) keeps precision close to the walls
        let cos_t = (PI * to_wall / l).sin();
        -(PI.powi(4) / (8.0 * l.powi(5))) * ((3.0 * t).sin() - 11.0 * t.sin()) / cos_t.powi(5)
    }
}

pub fn energy_single_wall(atom: &AtomSpec, d: f64) -> Result<f64> {
    ensure_positive("distance", d)?;
    let scales = NaturalScales::for_atom(atom, d)?;
    Ok(scales.energy_scale() * reduced::energy_single_wall(1.0))
}

pub fn mean_force_single_wall(atom: &AtomSpec, d: f64) -> Result<ForceValue> {
    ensure_positive("distance", d)?;
    let scales = NaturalScales::for_atom(atom, d)?;
    mean_force_single_wall_in(d, &scales)
}

/// Evaluates the single-wall force in the given natural scales.
pub fn mean_force_single_wall_in(d: f64, scales: &NaturalScales) -> Result<ForceValue> {
    ensure_positive("distance", d)?;
    let x = d / scales.length_scale;
    Ok(ForceValue::scaled(
        reduced::force_single_wall(x),
        scales.force_scale(),
    ))
}

pub fn mean_force_two_walls(atom: &AtomSpec, gap: f64, offset: f64) -> Result<ForceValue> {
    Geometry::TwoWalls { gap, offset }.validate()?;
    let scales = NaturalScales::for_atom(atom, gap)?;
    mean_force_two_walls_in(gap, offset, &scales)
}

pub fn mean_force_two_walls_in(
    gap: f64,
    offset: f64,
    scales: &NaturalScales,
) -> Result<ForceValue> {
    Geometry::TwoWalls { gap, offset }.validate()?;
    let l = scales.length_scale;
    Ok(ForceValue::scaled(
        reduced::force_two_walls(gap / l, offset / l),
        scales.force_scale(),
    ))
}

pub fn mean_force(atom: &AtomSpec, geometry: &Geometry) -> Result<ForceValue> {
    match *geometry {
        Geometry::SingleWall { d } => mean_force_single_wall(atom, d),
        Geometry::TwoWalls { gap, offset } => mean_force_two_walls(atom, gap, offset),
    }
}

/// Ratio of the two-wall force at distance `z` from the upper wall to the
/// magnitude of the single-wall force at the same distance. Tends to 1 as
/// `gap/z → ∞`.
pub fn single_wall_limit_of_two_walls(atom: &AtomSpec, z: f64, gap: f64) -> Result<f64> {
    ensure_positive("wall distance", z)?;
    ensure_positive("wall gap", gap)?;
    if z >= gap / 2.0 {
        return Err(Error::InvalidInput(format!(
            "wall distance must satisfy 0 < z < L/2 (got z = {z:e}, L = {gap:e})"
        )));
    }
    let two = mean_force_two_walls(atom, gap, gap / 2.0 - z)?;
    let one = mean_force_single_wall(atom, z)?;
    Ok(two.value / -one.value)
}
