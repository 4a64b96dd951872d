//! Extrapolation of Abel-damped values to zero damping.
//!
//! The damped integrals are even, analytic functions of the damping
//! parameter, so the values are extrapolated as a polynomial in `η²`
//! (Neville's scheme evaluated at zero).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    /// `diagonal[j]` uses the first `j + 1` damping values.
    pub diagonal: Vec<f64>,
    /// `|diagonal[n−1] − diagonal[n−2]|`.
    pub uncertainty: f64,
}

fn neville_at_zero(h: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
        }
    }
    p[0]
}

/// Extrapolates `values[i]` taken at `etas[i]` to `η → 0`. Rejects traces
/// whose successive estimates do not settle monotonically; changes at or
/// below `noise_floor` count as settled.
pub fn extrapolate_even(etas: &[f64], values: &[f64], noise_floor: f64) -> Result<Extrapolation> {
    assert_eq!(etas.len(), values.len());
    assert!(!etas.is_empty());
    let h: Vec<f64> = etas.iter().map(|e| e * e).collect();
    let diagonal: Vec<f64> = (1..=values.len())
        .map(|j| neville_at_zero(&h[..j], &values[..j]))
        .collect();
    let steps: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // the first step compares a raw value with a one-term extrapolation
    if steps.len() >= 3
        && steps[1..]
            .windows(2)
            .any(|w| w[1] > noise_floor && w[1] >= w[0])
    {
        return Err(Error::NonMonotoneExtrapolation { trace: diagonal });
    }
    let uncertainty = steps.last().copied().unwrap_or(f64::INFINITY);
    Ok(Extrapolation {
        value: *diagonal.last().unwrap(),
        diagonal,
        uncertainty,
    })
}
