//! JSON report schema. Every report carries `unit_convention`; SI fields
//! that need a polarizability are `null` when none was given.

use cpfluct_core::fluctuation::{Crossover, ThresholdOffset, TwoWallTerms};
use cpfluct_core::oracle::OracleReport;
use cpfluct_core::Geometry;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceReport {
    pub unit_convention: String,
    pub geometry: Geometry,
    pub alpha_m3: Option<f64>,
    /// Length used for the natural units, m.
    pub natural_length_m: f64,
    /// Force in units of `ħcα/ℓ⁵`.
    pub force_natural: f64,
    pub force_n: Option<f64>,
    pub log_abs_force_n: Option<f64>,
    pub direction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleWallFluct {
    pub unit_convention: String,
    pub distance_m: f64,
    pub time_s: f64,
    /// `x = cT/d`.
    pub x: f64,
    pub regime: String,
    pub alpha_m3: Option<f64>,
    pub mean_force_n: Option<f64>,
    pub std_n: Option<f64>,
    /// Standard deviation in units of `ħcα/d⁵`.
    pub std_natural: f64,
    pub relative: f64,
    pub log_relative: f64,
    pub asym_small_d: f64,
    pub asym_large_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoWallsFluct {
    pub unit_convention: String,
    pub gap_m: f64,
    pub offset_m: f64,
    pub time_s: f64,
    pub ct_over_gap: f64,
    /// False when `cT/L < 10`.
    pub valid: bool,
    pub relative: f64,
    pub log_relative: f64,
    pub log10_relative: f64,
    pub terms: TwoWallTerms,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum FluctReport {
    SingleWall(SingleWallFluct),
    TwoWalls(TwoWallsFluct),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param: f64,
    pub mean_force_n: Option<f64>,
    pub std_n: Option<f64>,
    pub relative: f64,
    pub asym_small_d: f64,
    pub asym_large_d: f64,
    pub regime: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub unit_convention: String,
    /// `distance` (m) or `time` (s).
    pub parameter: String,
    /// The parameter held fixed, in SI.
    pub fixed: f64,
    pub alpha_m3: Option<f64>,
    pub rows: Vec<ScanRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverReport {
    pub unit_convention: String,
    #[serde(flatten)]
    pub crossover: Crossover,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetPoint {
    pub offset_m: f64,
    pub log_relative: f64,
    pub log10_relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub unit_convention: String,
    pub cavity_length_m: f64,
    pub gap_m: f64,
    pub mean_speed_m_s: f64,
    pub time_s: f64,
    pub ct_over_gap: f64,
    pub valid: bool,
    /// Below this offset the relative fluctuation exceeds one.
    pub threshold: ThresholdOffset,
    /// Relative fluctuation at an offset of 1e-10 m.
    pub at_1e_10_m: OffsetPoint,
    pub sweep: Vec<OffsetPoint>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub name: String,
    pub tolerance: f64,
    pub pass: bool,
    pub report: OracleReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub unit_convention: String,
    pub suite: String,
    pub pass: bool,
    pub cases: Vec<VerifyCase>,
}
