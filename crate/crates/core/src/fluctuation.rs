//! Time-averaged force fluctuations.
//!
//! A measurement lasting `T` is modelled by a normalized Lorentzian response
//! `f(t) = (T/π)/(t² + T²)`, whose Fourier transform `e^{−|Ω|T}` damps every
//! spectral component of the time-averaged force. Everything here depends
//! on the measurement time through `cT`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::mean_force::Geometry;
use crate::quantities::{AtomSpec, NaturalScales, CODATA};

/// Below this `cT/L` the two-wall expression is outside its stated validity.
pub const TWO_WALL_VALIDITY: f64 = 10.0;

/// `√86/6`, the `d ≪ cT` coefficient (equal to `(1/3)√(43/2)`).
pub fn small_distance_coefficient() -> f64 {
    86f64.sqrt() / 6.0
}

/// `√5/6`, the `d ≫ cT` coefficient.
pub fn large_distance_coefficient() -> f64 {
    5f64.sqrt() / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseKind {
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementWindow {
    /// Integration time, s.
    pub time: f64,
    pub kind: ResponseKind,
}

impl MeasurementWindow {
    pub fn lorentzian(time: f64) -> Result<Self> {
        ensure_positive("measurement time", time)?;
        Ok(Self {
            time,
            kind: ResponseKind::Lorentzian,
        })
    }

    /// `cT`, m.
    pub fn light_length(&self) -> f64 {
        CODATA.c * self.time
    }

    /// Normalized response function, 1/s.
    pub fn response(&self, t: f64) -> f64 {
        match self.kind {
            ResponseKind::Lorentzian => self.time / (PI * (t * t + self.time * self.time)),
        }
    }
}

/// Spectral weight of the window at angular frequency `omega`.
pub fn window_attenuation(window: &MeasurementWindow, omega: f64) -> Result<f64> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::InvalidInput(format!(
            "frequency must be >= 0 (got {omega:e})"
        )));
    }
    Ok(match window.kind {
        ResponseKind::Lorentzian => (-omega * window.time).exp(),
    })
}

/// `P(x) = 5 + 40x² + 145x⁴ + 317x⁶ + 400x⁸ + 285x¹⁰ + 10x¹² + 86x¹⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctPolynomial;

impl FluctPolynomial {
    /// Coefficients of `x⁰, x², …, x¹⁴`.
    pub const COEFFICIENTS: [f64; 8] = [5.0, 40.0, 145.0, 317.0, 400.0, 285.0, 10.0, 86.0];

    pub fn eval(x: f64) -> f64 {
        let x2 = x * x;
        Self::COEFFICIENTS
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x2 + c)
    }

    /// `P(x)/x¹⁴` as a polynomial in `y = 1/x`.
    pub fn eval_reversed(y: f64) -> f64 {
        let y2 = y * y;
        Self::COEFFICIENTS.iter().fold(0.0, |acc, c| acc * y2 + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctStats {
    /// Standard deviation of the time-averaged force, N.
    pub std: Option<f64>,
    /// `std/|mean|`. May underflow to zero; `log_relative` is authoritative.
    pub relative: f64,
    pub log_relative: f64,
}

impl FluctStats {
    fn from_log(std: Option<f64>, log_relative: f64) -> Self {
        Self {
            std,
            relative: log_relative.exp(),
            log_relative,
        }
    }

    pub fn underflows(&self) -> bool {
        self.relative == 0.0 && self.log_relative.is_finite()
    }
}

/// Closed forms in `ħ = c = α = 1` units with lengths in units of `d`.
pub mod reduced {
    use super::*;

    /// Force standard deviation at unit distance, as a function of `x = cT/d`.
    pub fn std_single_wall(x: f64) -> f64 {
        if x <= 1.0 {
            FluctPolynomial::eval(x).sqrt() / (4.0 * PI * x.powi(5) * (1.0 + x * x).powi(4))
        } else {
            let y = 1.0 / x;
            FluctPolynomial::eval_reversed(y).sqrt()
                / (4.0 * PI * x.powi(6) * (1.0 + y * y).powi(4))
        }
    }

    /// `ln(std/|mean|)` as a function of `x = cT/d`.
    pub fn log_relative_single_wall(x: f64) -> f64 {
        if x <= 1.0 {
            0.5 * FluctPolynomial::eval(x).ln() - 6f64.ln() - 5.0 * x.ln() - 4.0 * (x * x).ln_1p()
        } else {
            let y = 1.0 / x;
            0.5 * FluctPolynomial::eval_reversed(y).ln()
                - 6f64.ln()
                - 6.0 * x.ln()
                - 4.0 * (y * y).ln_1p()
        }
    }

    pub fn relative_single_wall(x: f64) -> f64 {
        log_relative_single_wall(x).exp()
    }
}

pub fn force_std_single_wall(atom: &AtomSpec, d: f64, window: &MeasurementWindow) -> Result<f64> {
    ensure_positive("distance", d)?;
    let scales = NaturalScales::for_atom(atom, d)?;
    let x = window.light_length() / d;
    Ok(scales.force_scale() * reduced::std_single_wall(x))
}

pub fn relative_fluct_single_wall(
    atom: &AtomSpec,
    d: f64,
    window: &MeasurementWindow,
) -> Result<FluctStats> {
    let std = force_std_single_wall(atom, d, window)?;
    let x = window.light_length() / d;
    Ok(FluctStats::from_log(
        Some(std),
        reduced::log_relative_single_wall(x),
    ))
}

/// Which side of the crossover an asymptotic form describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d ≪ cT`.
    SmallD,
    /// `d ≫ cT`.
    LargeD,
}

impl Regime {
    /// `SmallD` when `cT ≥ d`.
    pub fn classify(d: f64, ct: f64) -> Self {
        if ct >= d {
            Regime::SmallD
        } else {
            Regime::LargeD
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SmallD => "small_d",
            Regime::LargeD => "large_d",
        }
    }
}

pub fn asymptotic_relative(regime: Regime, d: f64, ct: f64) -> Result<f64> {
    ensure_positive("distance", d)?;
    ensure_positive("cT", ct)?;
    let r = d / ct;
    Ok(match regime {
        Regime::SmallD => small_distance_coefficient() * r.powi(6),
        Regime::LargeD => large_distance_coefficient() * r.powi(5),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub distance: f64,
    /// Measurement time `T*` at which the relative fluctuation equals one, s.
    pub time: f64,
    /// `cT*/d`.
    pub x: f64,
    /// `d/cT*`.
    pub distance_over_ct: f64,
    /// `|relative(T*) − 1|`.
    pub residual: f64,
    /// `T*` implied by the `d ≪ cT` asymptote alone, s.
    pub small_d_estimate: f64,
    /// `T*` implied by the `d ≫ cT` asymptote alone, s.
    pub large_d_estimate: f64,
}

const CROSSOVER_BRACKET: (f64, f64) = (1e-3, 1e3);

/// Solves `relative(d, T) = 1` for `T` on the exact ratio.
pub fn crossover_time(d: f64) -> Result<Crossover> {
    ensure_positive("distance", d)?;
    let (lo, hi) = (CROSSOVER_BRACKET.0.ln(), CROSSOVER_BRACKET.1.ln());
    let g = |lx: f64| reduced::log_relative_single_wall(lx.exp());

    let samples = 400;
    let mut prev = g(lo);
    for i in 1..=samples {
        let lx = lo + (hi - lo) * f64::from(i) / f64::from(samples);
        let cur = g(lx);
        if cur.is_nan() || cur >= prev {
            return Err(Error::NotMonotone { at: lx.exp() });
        }
        prev = cur;
    }
    let (f_lo, f_hi) = (g(lo), g(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure {
            lo: lo.exp(),
            hi: hi.exp(),
            f_lo: f_lo.exp(),
            f_hi: f_hi.exp(),
        });
    }
    let mut conv = roots::SimpleConvergency {
        eps: 1e-15,
        max_iter: 200,
    };
    let lx = roots::find_root_brent(lo, hi, g, &mut conv)
        .map_err(|e| Error::RootFinder(format!("{e:?}")))?;
    let x = lx.exp();
    let c = CODATA.c;
    Ok(Crossover {
        distance: d,
        time: x * d / c,
        x,
        distance_over_ct: 1.0 / x,
        residual: (reduced::relative_single_wall(x) - 1.0).abs(),
        small_d_estimate: d * small_distance_coefficient().powf(1.0 / 6.0) / c,
        large_d_estimate: d * large_distance_coefficient().powf(1.0 / 5.0) / c,
    })
}

/// Log-space pieces of the two-wall relative fluctuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoWallTerms {
    /// `−πcT/L`.
    pub exponential: f64,
    /// `−(5/2) ln(2πcT/L)`.
    pub power: f64,
    /// `ln[cos⁶(πd/L) / |sin(3πd/L) − 11 sin(πd/L)|]`.
    pub geometry: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoWallFluct {
    pub stats: FluctStats,
    /// `cT/L`.
    pub ct_over_gap: f64,
    /// False when `cT/L < 10`, where the simplified expression is not
    /// expected to hold.
    pub valid: bool,
    pub terms: TwoWallTerms,
}

/// `ln[cos⁶θ/|sin3θ − 11 sinθ|]` for `θ = π|d|/L`, computed without
/// cancellation: `|sin3θ − 11 sinθ| = 8 sinθ + 4 sin³θ`.
fn two_wall_geometry_log(gap: f64, offset: f64) -> f64 {
    let theta = PI * offset.abs() / gap;
    let cos_t = (PI * (gap / 2.0 - offset.abs()) / gap).sin();
    let s = theta.sin();
    6.0 * cos_t.ln() - (s * (8.0 + 4.0 * s * s)).ln()
}

fn two_wall_prefactor_log(ct_over_gap: f64) -> (f64, f64) {
    (-PI * ct_over_gap, -2.5 * (2.0 * PI * ct_over_gap).ln())
}

pub fn relative_fluct_two_walls(
    gap: f64,
    offset: f64,
    window: &MeasurementWindow,
) -> Result<TwoWallFluct> {
    Geometry::TwoWalls { gap, offset }.validate()?;
    if offset == 0.0 {
        return Err(Error::MidplaneDivergence);
    }
    let r = window.light_length() / gap;
    let (exponential, power) = two_wall_prefactor_log(r);
    let geometry = two_wall_geometry_log(gap, offset);
    Ok(TwoWallFluct {
        stats: FluctStats::from_log(None, exponential + power + geometry),
        ct_over_gap: r,
        valid: r >= TWO_WALL_VALIDITY,
        terms: TwoWallTerms {
            exponential,
            power,
            geometry,
        },
    })
}

/// Offset from the midplane inside which the two-wall relative fluctuation
/// exceeds one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOffset {
    /// `ln(d*/m)`.
    pub log_offset: f64,
    /// `d*`, m. Zero when it underflows.
    pub offset: f64,
    /// True when the relative fluctuation exceeds one across the whole gap.
    pub covers_gap: bool,
}

pub fn offset_for_unit_relative(gap: f64, window: &MeasurementWindow) -> Result<ThresholdOffset> {
    ensure_positive("wall gap", gap)?;
    let r = window.light_length() / gap;
    let (e, p) = two_wall_prefactor_log(r);
    let target = e + p;
    // h(θ) = ln|sin3θ − 11 sinθ| − 6 ln cosθ increases from −∞ to +∞ on (0, π/2),
    // and h(θ) = ln 8 + ln θ + O(θ²) near zero.
    let h = |lt: f64| {
        let theta = lt.exp();
        let s = theta.sin();
        (s * (8.0 + 4.0 * s * s)).ln() - 6.0 * (PI / 2.0 - theta).sin().ln()
    };
    let ln_theta_small = target - 8f64.ln();
    let ln_scale = (gap / PI).ln();
    if ln_theta_small < -200.0 {
        return Ok(ThresholdOffset {
            log_offset: ln_theta_small + ln_scale,
            offset: (ln_theta_small + ln_scale).exp(),
            covers_gap: false,
        });
    }
    let hi = (PI / 2.0 * (1.0 - 1e-12)).ln();
    if h(hi) <= target {
        return Ok(ThresholdOffset {
            log_offset: (gap / 2.0).ln(),
            offset: gap / 2.0,
            covers_gap: true,
        });
    }
    let lo = (ln_theta_small - 1.0).min(hi - 1.0);
    let f = |lt: f64| h(lt) - target;
    if f(lo) >= 0.0 {
        return Err(Error::BracketFailure {
            lo: lo.exp(),
            hi: hi.exp(),
            f_lo: f(lo),
            f_hi: f(hi),
        });
    }
    let mut conv = roots::SimpleConvergency {
        eps: 1e-14,
        max_iter: 200,
    };
    let lt = roots::find_root_brent(lo, hi, f, &mut conv)
        .map_err(|e| Error::RootFinder(format!("{e:?}")))?;
    Ok(ThresholdOffset {
        log_offset: lt + ln_scale,
        offset: (lt + ln_scale).exp(),
        covers_gap: false,
    })
}

/// Time an atom at `mean_speed` needs to cross a cavity of length `cavity_length`.
pub fn transit_time(cavity_length: f64, mean_speed: f64) -> Result<f64> {
    ensure_positive("cavity length", cavity_length)?;
    ensure_positive("mean speed", mean_speed)?;
    Ok(cavity_length / mean_speed)
}

/// Maxwell-Boltzmann mean speed `√(8 k_B T/(π m))`.
pub fn mb_mean_speed(mass: f64, temperature: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("temperature", temperature)?;
    Ok((8.0 * CODATA.k_b * temperature / (PI * mass)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom() -> AtomSpec {
        AtomSpec::new(2e-29).unwrap()
    }

    #[test]
    fn polynomial_table() {
        assert_eq!(
            FluctPolynomial::COEFFICIENTS,
            [5.0, 40.0, 145.0, 317.0, 400.0, 285.0, 10.0, 86.0]
        );
        assert_eq!(FluctPolynomial::eval(1.0), 1288.0);
        assert_eq!(FluctPolynomial::eval(0.0), 5.0);
        for x in [0.3f64, 2.0, 17.0] {
            let r = FluctPolynomial::eval_reversed(1.0 / x) * x.powi(14);
            assert!((r / FluctPolynomial::eval(x) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn attenuation() {
        let w = MeasurementWindow::lorentzian(2.0).unwrap();
        assert_eq!(window_attenuation(&w, 0.0).unwrap(), 1.0);
        assert!((window_attenuation(&w, 0.5).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(window_attenuation(&w, -1.0).is_err());
        let w2 = MeasurementWindow::lorentzian(3.0).unwrap();
        assert!(window_attenuation(&w2, 0.5).unwrap() < window_attenuation(&w, 0.5).unwrap());
    }

    #[test]
    fn attenuation_is_fourier_transform_of_response() {
        // ∫ f(t) cos(Ωt) dt with t = T tan θ, on a fine midpoint grid.
        let w = MeasurementWindow::lorentzian(1.0).unwrap();
        let omega = 1.0;
        let n = 2_000_000;
        let h = PI / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let th = -PI / 2.0 + (i as f64 + 0.5) * h;
            let t = th.tan();
            acc += w.response(t) * (omega * t).cos() * (1.0 + t * t) * h;
        }
        let want = window_attenuation(&w, omega).unwrap();
        assert!((acc - want).abs() < 1e-4, "{acc} vs {want}");
    }

    #[test]
    fn std_at_unit_ratio() {
        let v = reduced::std_single_wall(1.0);
        let want = 1288f64.sqrt() / 16.0 / (4.0 * PI);
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.178_495_834).abs() < 1e-9);
    }

    #[test]
    fn std_large_distance_limit() {
        // x → 0: std·x⁵ → √5/4π
        let x = 1e-4;
        let v = reduced::std_single_wall(x) * x.powi(5);
        assert!((v / (5f64.sqrt() / (4.0 * PI)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn std_si_matches_reduced() {
        let a = atom();
        let d = 1e-6;
        let w = MeasurementWindow::lorentzian(d / CODATA.c).unwrap();
        let s = force_std_single_wall(&a, d, &w).unwrap();
        let want = CODATA.hbar_c() * a.alpha_static / d.powi(5) * reduced::std_single_wall(1.0);
        assert!((s / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relative_is_alpha_free_and_consistent() {
        let d = 3e-7;
        let w = MeasurementWindow::lorentzian(2e-15).unwrap();
        let a = relative_fluct_single_wall(&AtomSpec::new(1e-30).unwrap(), d, &w).unwrap();
        let b = relative_fluct_single_wall(&AtomSpec::new(5e-29).unwrap(), d, &w).unwrap();
        assert_eq!(a.relative, b.relative);
        let mean = crate::mean_force::mean_force_single_wall(&atom(), d)
            .unwrap()
            .value;
        let direct = force_std_single_wall(&atom(), d, &w).unwrap() / mean.abs();
        assert!((direct / a.relative - 1.0).abs() < 1e-12);
        assert!((a.log_relative.exp() / a.relative - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_limits() {
        let r = reduced::relative_single_wall(100.0);
        let a = asymptotic_relative(Regime::SmallD, 1.0, 100.0).unwrap();
        assert!((r / a - 1.0).abs() < 0.01);
        let r = reduced::relative_single_wall(0.01);
        let a = asymptotic_relative(Regime::LargeD, 1.0, 0.01).unwrap();
        assert!((r / a - 1.0).abs() < 0.01);
    }

    #[test]
    fn asymptotic_coefficients() {
        let s = asymptotic_relative(Regime::SmallD, 1.0, 1.0).unwrap();
        assert!((s - (43.0f64 / 2.0).sqrt() / 3.0).abs() < 1e-15);
        assert!((s - 1.545_603).abs() < 1e-6);
        let l = asymptotic_relative(Regime::LargeD, 1.0, 1.0).unwrap();
        assert!((l - 0.372_678).abs() < 1e-6);
        let s2 = asymptotic_relative(Regime::SmallD, 2.0, 1.0).unwrap();
        assert!((s2 / s - 64.0).abs() < 1e-12);
        assert!(asymptotic_relative(Regime::SmallD, 0.0, 1.0).is_err());
    }

    #[test]
    fn crossover_for_one_micron() {
        let c = crossover_time(1e-6).unwrap();
        assert!(c.time > 1e-15 && c.time < 1e-14, "{c:?}");
        assert!(c.residual < 1e-9);
        let w_short = MeasurementWindow::lorentzian(c.time / 10.0).unwrap();
        let w_long = MeasurementWindow::lorentzian(c.time * 10.0).unwrap();
        assert!(
            relative_fluct_single_wall(&atom(), 1e-6, &w_short)
                .unwrap()
                .relative
                > 1.0
        );
        assert!(
            relative_fluct_single_wall(&atom(), 1e-6, &w_long)
                .unwrap()
                .relative
                < 1.0
        );
        let c2 = crossover_time(2e-6).unwrap();
        assert!((c2.time / c.time - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_wall_geometry_factor_at_quarter() {
        let g = two_wall_geometry_log(1.0, 0.25).exp();
        let direct =
            (PI / 4.0).cos().powi(6) / ((3.0 * PI / 4.0).sin() - 11.0 * (PI / 4.0).sin()).abs();
        assert!((g - direct).abs() < 1e-15);
        assert!((g - 0.017_677_7).abs() < 1e-7);
    }

    #[test]
    fn two_wall_midplane_rejected() {
        let w = MeasurementWindow::lorentzian(1e-5).unwrap();
        assert!(matches!(
            relative_fluct_two_walls(1e-6, 0.0, &w),
            Err(Error::MidplaneDivergence)
        ));
        assert!(relative_fluct_two_walls(1e-6, 5e-7, &w).is_err());
    }

    #[test]
    fn two_wall_log_space_across_decades() {
        let gap = 1e-6;
        for e in 0..=10 {
            let r = 10f64.powi(e);
            let w = MeasurementWindow::lorentzian(r * gap / CODATA.c).unwrap();
            let t = relative_fluct_two_walls(gap, 0.1 * gap, &w).unwrap();
            assert!(t.stats.log_relative.is_finite());
            assert_eq!(t.valid, r >= 10.0);
            if t.stats.relative > 0.0 && t.stats.relative.is_normal() {
                assert!((t.stats.relative.ln() / t.stats.log_relative - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn threshold_offset_solves_unit_relative() {
        let gap = 1e-6;
        for r in [1.0, 3.0, 20.0] {
            let w = MeasurementWindow::lorentzian(r * gap / CODATA.c).unwrap();
            let t = offset_for_unit_relative(gap, &w).unwrap();
            assert!(!t.covers_gap);
            let f = relative_fluct_two_walls(gap, t.offset, &w).unwrap();
            assert!(f.stats.log_relative.abs() < 1e-8, "{r}: {f:?}");
        }
        // astronomically small threshold stays representable in log space
        let w = MeasurementWindow::lorentzian(1e-5).unwrap();
        let t = offset_for_unit_relative(gap, &w).unwrap();
        assert_eq!(t.offset, 0.0);
        assert!(t.log_offset < -9e9);
    }

    #[test]
    fn transit_and_speed() {
        assert!((transit_time(8e-3, 800.0).unwrap() - 1e-5).abs() < 1e-20);
        assert!((transit_time(8e-3, 400.0).unwrap() - 2e-5).abs() < 1e-20);
        assert!(transit_time(0.0, 1.0).is_err());
        let v = mb_mean_speed(3.818e-26, 600.0).unwrap();
        assert!((v - 743.3).abs() < 0.5, "{v}");
        assert!((mb_mean_speed(3.818e-26, 2400.0).unwrap() / v - 2.0).abs() < 1e-12);
        assert!((mb_mean_speed(4.0 * 3.818e-26, 600.0).unwrap() / v - 0.5).abs() < 1e-12);
        assert!(mb_mean_speed(-1.0, 600.0).is_err());
        let t = transit_time(8e-3, v).unwrap();
        assert!(t > 1e-6 && t < 1e-4);
    }
}
