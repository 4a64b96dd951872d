use serde::{Deserialize, Serialize};

use crate::quantities::UNIT_CONVENTION;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Damping length, cutoff, or sample count, depending on the method.
    pub refinement: f64,
    pub value: f64,
}

/// An oracle value next to the closed form it checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub unit: String,
    pub method: String,
    pub value: f64,
    pub closed_form: f64,
    /// `|value − closed_form|/|closed_form|`; absent when the closed form is zero.
    pub relative_error: Option<f64>,
    pub absolute_error: f64,
    /// Estimated error of `value` from the refinement sequence.
    pub uncertainty: f64,
    pub convergence_trace: Vec<TracePoint>,
    /// Successive extrapolated estimates, when the method extrapolates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extrapolation: Vec<f64>,
    pub unit_convention: String,
}

impl OracleReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        quantity: &str,
        unit: &str,
        method: &str,
        value: f64,
        closed_form: f64,
        uncertainty: f64,
        convergence_trace: Vec<TracePoint>,
        extrapolation: Vec<f64>,
    ) -> Self {
        let absolute_error = (value - closed_form).abs();
        let relative_error = (closed_form != 0.0).then(|| absolute_error / closed_form.abs());
        Self {
            quantity: quantity.to_owned(),
            unit: unit.to_owned(),
            method: method.to_owned(),
            value,
            closed_form,
            relative_error,
            absolute_error,
            uncertainty,
            convergence_trace,
            extrapolation,
            unit_convention: UNIT_CONVENTION.to_owned(),
        }
    }

    /// Relative agreement within `tolerance`. A zero closed form needs an
    /// explicit absolute reference; see [`OracleReport::within_absolute`].
    pub fn within(&self, tolerance: f64) -> bool {
        self.relative_error.is_some_and(|e| e <= tolerance)
    }

    pub fn within_absolute(&self, bound: f64) -> bool {
        self.absolute_error <= bound
    }
}
