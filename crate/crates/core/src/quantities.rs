//! Physical constants, atom description, and the natural-unit reduction.
//!
//! All closed forms and oracles work in reduced units where `ħ = c = α = 1`
//! and lengths are measured in a reference length `ℓ`. A force in those
//! units is multiplied by `ħcα/ℓ⁵` to get newtons, an energy by `ħcα/ℓ⁴`,
//! and a time is `ℓ/c`.
//!
//! The static polarizability is carried as a volume (Gaussian convention),
//! which is the only convention under which `ħcα/d⁵` is a force. SI
//! polarizabilities (C·m²/V) are divided by `4πε₀` on the way in.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Label printed with every report so the polarizability convention is explicit.
pub const UNIT_CONVENTION: &str = "gaussian-alpha";

/// Far-zone validity threshold on `d·ω₀/c`.
pub const FAR_ZONE_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
}

/// CODATA 2018 values.
pub const CODATA: Constants = Constants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    eps0: 8.854_187_812_8e-12,
};

impl Constants {
    /// `ħc` in J·m.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaConvention {
    /// Volume polarizability, m³.
    Gaussian,
    /// SI polarizability, C·m²/V.
    Si,
}

/// A polarizable atom in the far zone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    /// Static polarizability as a volume, m³.
    pub alpha_static: f64,
    /// Dominant transition angular frequency, rad/s.
    pub omega0: Option<f64>,
    pub label: String,
}

impl AtomSpec {
    pub fn new(alpha_static: f64) -> Result<Self> {
        Self::with_label(alpha_static, None, "")
    }

    pub fn with_label(alpha_static: f64, omega0: Option<f64>, label: &str) -> Result<Self> {
        ensure_positive("alpha_static", alpha_static)?;
        if let Some(w) = omega0 {
            ensure_positive("omega0", w)?;
        }
        Ok(Self {
            alpha_static,
            omega0,
            label: label.to_owned(),
        })
    }

    /// Builds an atom from a polarizability given in either convention.
    pub fn from_convention(
        alpha: f64,
        convention: AlphaConvention,
        omega0: Option<f64>,
        label: &str,
    ) -> Result<Self> {
        let volume = match convention {
            AlphaConvention::Gaussian => alpha,
            AlphaConvention::Si => si_to_gaussian_alpha(alpha),
        };
        Self::with_label(volume, omega0, label)
    }
}

/// Converts an SI polarizability (C·m²/V) to a volume (m³).
pub fn si_to_gaussian_alpha(alpha_si: f64) -> f64 {
    alpha_si / (4.0 * std::f64::consts::PI * CODATA.eps0)
}

/// One entry of the species config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub label: String,
    pub alpha: f64,
    pub alpha_convention: AlphaConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_rad_s: Option<f64>,
}

impl Species {
    pub fn atom(&self) -> Result<AtomSpec> {
        AtomSpec::from_convention(
            self.alpha,
            self.alpha_convention,
            self.omega0_rad_s,
            &self.label,
        )
    }
}

/// Species config file: `{"species": [{...}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesFile {
    pub species: Vec<Species>,
}

impl SpeciesFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpeciesFile = serde_json::from_str(text)?;
        for s in &file.species {
            s.atom()?;
            if let Some(m) = s.mass_kg {
                ensure_positive("mass_kg", m)?;
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, label: &str) -> Result<&Species> {
        self.species
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::Config(format!("species `{label}` not found")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Length,
    Time,
    Force,
    Energy,
    Mass,
    Temperature,
    Speed,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Force => "force",
            Dimension::Energy => "energy",
            Dimension::Mass => "mass",
            Dimension::Temperature => "temperature",
            Dimension::Speed => "speed",
        };
        f.write_str(name)
    }
}

/// An SI value tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Self {
        Self { value, dimension }
    }
}

/// Reference scales for the `ħ = c = α = 1` reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalScales {
    pub length_scale: f64,
    pub alpha: f64,
    pub constants: Constants,
}

impl NaturalScales {
    pub fn new(length_scale: f64, alpha: f64) -> Result<Self> {
        ensure_positive("length_scale", length_scale)?;
        ensure_positive("alpha", alpha)?;
        Ok(Self {
            length_scale,
            alpha,
            constants: CODATA,
        })
    }

    pub fn for_atom(atom: &AtomSpec, length_scale: f64) -> Result<Self> {
        Self::new(length_scale, atom.alpha_static)
    }

    /// `ħcα/ℓ⁵`, N.
    pub fn force_scale(&self) -> f64 {
        self.constants.hbar_c() * self.alpha / self.length_scale.powi(5)
    }

    /// `ħcα/ℓ⁴`, J.
    pub fn energy_scale(&self) -> f64 {
        self.constants.hbar_c() * self.alpha / self.length_scale.powi(4)
    }

    /// `ℓ/c`, s.
    pub fn time_scale(&self) -> f64 {
        self.length_scale / self.constants.c
    }

    fn scale_of(&self, dimension: Dimension) -> Result<f64> {
        match dimension {
            Dimension::Length => Ok(self.length_scale),
            Dimension::Time => Ok(self.time_scale()),
            Dimension::Force => Ok(self.force_scale()),
            Dimension::Energy => Ok(self.energy_scale()),
            other => Err(Error::UnsupportedDimension(other.to_string())),
        }
    }
}

pub fn to_natural(value: Quantity, scales: &NaturalScales) -> Result<f64> {
    Ok(value.value / scales.scale_of(value.dimension)?)
}

pub fn from_natural(value: f64, dimension: Dimension, scales: &NaturalScales) -> Result<Quantity> {
    Ok(Quantity::new(
        value * scales.scale_of(dimension)?,
        dimension,
    ))
}

/// Outcome of the far-zone check `d·ω₀/c > 10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FarZone {
    Valid { margin: f64 },
    Invalid { margin: f64 },
    Unknown,
}

impl FarZone {
    pub fn margin(&self) -> Option<f64> {
        match *self {
            FarZone::Valid { margin } | FarZone::Invalid { margin } => Some(margin),
            FarZone::Unknown => None,
        }
    }
}

pub fn far_zone_check(atom: &AtomSpec, d: f64) -> Result<FarZone> {
    ensure_positive("distance", d)?;
    Ok(match atom.omega0 {
        None => FarZone::Unknown,
        Some(w) => {
            let margin = d * w / CODATA.c;
            if margin > FAR_ZONE_THRESHOLD {
                FarZone::Valid { margin }
            } else {
                FarZone::Invalid { margin }
            }
        }
    })
}
