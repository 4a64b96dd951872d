use std::f64::consts::PI;

use clap::ValueEnum;
use cpfluct_core::fluctuation::{
    self, asymptotic_relative, crossover_time, mb_mean_speed, offset_for_unit_relative,
    relative_fluct_two_walls, transit_time, MeasurementWindow, Regime,
};
use cpfluct_core::mean_force::{self, reduced as force_reduced, Geometry};
use cpfluct_core::oracle::{
    mean_energy_modesum, mean_force_modesum, two_wall_force_modesum, variance_modesum, ModeSumGrid,
};
use cpfluct_core::quantities::{si_to_gaussian_alpha, AtomSpec, SpeciesFile, CODATA};
use cpfluct_core::{NaturalScales, UNIT_CONVENTION};
use rayon::prelude::*;

use crate::args::{
    AtomArgs, CrossoverArgs, ExperimentArgs, FluctArgs, ForceArgs, GeometryArgs, ScanArgs, Spacing,
    Suite, SweepParam, VerifyArgs,
};
use crate::report::*;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Distance and polarizability used by `verify`; the relative errors do not
/// depend on either.
pub const VERIFY_LENGTH: f64 = 1e-6;
pub const VERIFY_ALPHA: f64 = 2e-29;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve_atom(args: &AtomArgs) -> Result<Option<AtomSpec>> {
    if let Some(a) = args.alpha {
        return Ok(Some(AtomSpec::new(a)?));
    }
    if let Some(a) = args.alpha_si {
        return Ok(Some(AtomSpec::new(si_to_gaussian_alpha(a))?));
    }
    if let (Some(path), Some(label)) = (&args.config, &args.species) {
        let file = SpeciesFile::load(path)?;
        return Ok(Some(file.get(label)?.atom()?));
    }
    Ok(None)
}

fn species_mass(args: &AtomArgs) -> Result<Option<f64>> {
    if let (Some(path), Some(label)) = (&args.config, &args.species) {
        return Ok(SpeciesFile::load(path)?.get(label)?.mass_kg);
    }
    Ok(None)
}

fn geometry(args: &GeometryArgs) -> Result<Geometry> {
    let g = if args.single {
        Geometry::SingleWall {
            d: args
                .distance
                .ok_or_else(|| invalid("--single needs --distance"))?,
        }
    } else {
        Geometry::TwoWalls {
            gap: args.gap.ok_or_else(|| invalid("--two-walls needs --gap"))?,
            offset: args
                .offset
                .ok_or_else(|| invalid("--two-walls needs --offset"))?,
        }
    };
    g.validate()?;
    Ok(g)
}

fn reduced_force(g: &Geometry) -> f64 {
    match *g {
        Geometry::SingleWall { .. } => force_reduced::force_single_wall(1.0),
        Geometry::TwoWalls { gap, offset } => force_reduced::force_two_walls(1.0, offset / gap),
    }
}

pub fn force(args: &ForceArgs) -> Result<ForceReport> {
    let g = geometry(&args.geometry)?;
    let atom = resolve_atom(&args.atom)?;
    let natural = reduced_force(&g);
    let si = atom
        .as_ref()
        .map(|a| mean_force::mean_force(a, &g))
        .transpose()?;
    let direction = match g {
        Geometry::SingleWall { .. } => "attractive (toward the wall)",
        Geometry::TwoWalls { .. } if natural == 0.0 => "zero (midplane)",
        Geometry::TwoWalls { .. } => "toward the nearer wall",
    };
    Ok(ForceReport {
        unit_convention: UNIT_CONVENTION.to_owned(),
        geometry: g,
        alpha_m3: atom.as_ref().map(|a| a.alpha_static),
        natural_length_m: g.reference_length(),
        force_natural: natural,
        force_n: si.map(|f| f.value),
        log_abs_force_n: si.and_then(|f| f.log_magnitude),
        direction: direction.to_owned(),
    })
}

fn single_wall_fluct(atom: Option<&AtomSpec>, d: f64, time: f64) -> Result<SingleWallFluct> {
    let window = MeasurementWindow::lorentzian(time)?;
    let ct = window.light_length();
    let x = ct / d;
    let log_relative = fluctuation::reduced::log_relative_single_wall(x);
    let (mean, std) = match atom {
        Some(a) => (
            Some(mean_force::mean_force_single_wall(a, d)?.value),
            Some(fluctuation::force_std_single_wall(a, d, &window)?),
        ),
        None => (None, None),
    };
    Ok(SingleWallFluct {
        unit_convention: UNIT_CONVENTION.to_owned(),
        distance_m: d,
        time_s: time,
        x,
        regime: Regime::classify(d, ct).as_str().to_owned(),
        alpha_m3: atom.as_ref().map(|a| a.alpha_static),
        mean_force_n: mean,
        std_n: std,
        std_natural: fluctuation::reduced::std_single_wall(x),
        relative: log_relative.exp(),
        log_relative,
        asym_small_d: asymptotic_relative(Regime::SmallD, d, ct)?,
        asym_large_d: asymptotic_relative(Regime::LargeD, d, ct)?,
    })
}

pub fn fluct(args: &FluctArgs) -> Result<FluctReport> {
    let g = geometry(&args.geometry)?;
    let atom = resolve_atom(&args.atom)?;
    match g {
        Geometry::SingleWall { d } => Ok(FluctReport::SingleWall(single_wall_fluct(
            atom.as_ref(),
            d,
            args.time,
        )?)),
        Geometry::TwoWalls { gap, offset } => {
            let window = MeasurementWindow::lorentzian(args.time)?;
            let f = relative_fluct_two_walls(gap, offset, &window)?;
            let mut notes = Vec::new();
            if f.stats.underflows() {
                notes.push("underflow, see log field");
            }
            if !f.valid {
                notes.push("cT/L < 10: simplified two-wall expression not expected to hold");
            }
            Ok(FluctReport::TwoWalls(TwoWallsFluct {
                unit_convention: UNIT_CONVENTION.to_owned(),
                gap_m: gap,
                offset_m: offset,
                time_s: args.time,
                ct_over_gap: f.ct_over_gap,
                valid: f.valid,
                relative: f.stats.relative,
                log_relative: f.stats.log_relative,
                log10_relative: f.stats.log_relative / std::f64::consts::LN_10,
                terms: f.terms,
                note: (!notes.is_empty()).then(|| notes.join("; ")),
            }))
        }
    }
}

/// Sweep points in ascending order.
pub fn sweep_points(from: f64, to: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(invalid("--points must be at least 1"));
    }
    if !(from > 0.0 && from.is_finite() && to.is_finite())
        || to < from
        || (points > 1 && to == from)
    {
        return Err(invalid(format!(
            "sweep range must satisfy 0 < from < to (got from = {from:e}, to = {to:e})"
        )));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / n;
            match (i, spacing) {
                (0, _) => from,
                (i, _) if i == points - 1 => to,
                (_, Spacing::Linear) => from + (to - from) * t,
                (_, Spacing::Log) => (from.ln() + (to.ln() - from.ln()) * t).exp(),
            }
        })
        .collect())
}

pub fn scan(args: &ScanArgs) -> Result<ScanReport> {
    let atom = resolve_atom(&args.atom)?;
    let params = sweep_points(args.from, args.to, args.points, args.spacing)?;
    let fixed = match args.param {
        SweepParam::Distance => args
            .time
            .ok_or_else(|| invalid("--param distance needs --time"))?,
        SweepParam::Time => args
            .distance
            .ok_or_else(|| invalid("--param time needs --distance"))?,
    };
    let rows = params
        .par_iter()
        .map(|&p| {
            let (d, t) = match args.param {
                SweepParam::Distance => (p, fixed),
                SweepParam::Time => (fixed, p),
            };
            let f = single_wall_fluct(atom.as_ref(), d, t)?;
            Ok(ScanRow {
                param: p,
                mean_force_n: f.mean_force_n,
                std_n: f.std_n,
                relative: f.relative,
                asym_small_d: f.asym_small_d,
                asym_large_d: f.asym_large_d,
                regime: f.regime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        unit_convention: UNIT_CONVENTION.to_owned(),
        parameter: match args.param {
            SweepParam::Distance => "distance",
            SweepParam::Time => "time",
        }
        .to_owned(),
        fixed,
        alpha_m3: atom.as_ref().map(|a| a.alpha_static),
        rows,
    })
}

pub fn crossover(args: &CrossoverArgs) -> Result<CrossoverReport> {
    Ok(CrossoverReport {
        unit_convention: UNIT_CONVENTION.to_owned(),
        crossover: crossover_time(args.distance)?,
    })
}

fn offset_point(gap: f64, offset: f64, window: &MeasurementWindow) -> Result<OffsetPoint> {
    let f = relative_fluct_two_walls(gap, offset, window)?;
    Ok(OffsetPoint {
        offset_m: offset,
        log_relative: f.stats.log_relative,
        log10_relative: f.stats.log_relative / std::f64::consts::LN_10,
    })
}

pub fn experiment(args: &ExperimentArgs) -> Result<ExperimentReport> {
    let speed = match (args.speed, args.temperature) {
        (Some(v), _) => v,
        (None, Some(temp)) => {
            let mass = match args.mass {
                Some(m) => m,
                None => species_mass(&args.atom)?.ok_or_else(|| {
                    invalid("--temperature needs --mass or a species entry with mass_kg")
                })?,
            };
            mb_mean_speed(mass, temp)?
        }
        (None, None) => {
            return Err(invalid(
                "experiment needs either --speed or --temperature with a mass",
            ))
        }
    };
    let time = transit_time(args.cavity_length, speed)?;
    let window = MeasurementWindow::lorentzian(time)?;
    let gap = args.gap;
    let threshold = offset_for_unit_relative(gap, &window)?;
    if args.points == 0 {
        return Err(invalid("--points must be at least 1"));
    }
    let offsets = sweep_points(gap * 1e-6, gap * 0.49, args.points, Spacing::Log)?;
    let sweep = offsets
        .iter()
        .map(|&d| offset_point(gap, d, &window))
        .collect::<Result<Vec<_>>>()?;
    let at_1e_10_m = if 1e-10 < gap / 2.0 {
        offset_point(gap, 1e-10, &window)?
    } else {
        return Err(invalid("gap must exceed 2e-10 m"));
    };
    let probe = relative_fluct_two_walls(gap, 1e-10, &window)?;
    let verdict = if threshold.covers_gap {
        "observable: relative fluctuation exceeds one across the whole gap".to_owned()
    } else if threshold.log_offset < (1e-10f64).ln() {
        format!(
            "hardly observable: relative fluctuation exceeds one only within 10^{:.4e} m of the midplane and is already negligible at 1e-10 m",
            threshold.log_offset / std::f64::consts::LN_10
        )
    } else {
        format!(
            "observable near the midplane: relative fluctuation exceeds one within {:.3e} m",
            threshold.offset
        )
    };
    Ok(ExperimentReport {
        unit_convention: UNIT_CONVENTION.to_owned(),
        cavity_length_m: args.cavity_length,
        gap_m: gap,
        mean_speed_m_s: speed,
        time_s: time,
        ct_over_gap: probe.ct_over_gap,
        valid: probe.valid,
        threshold,
        at_1e_10_m,
        sweep,
        verdict,
    })
}

fn case(name: String, tolerance: f64, report: cpfluct_core::oracle::OracleReport) -> VerifyCase {
    VerifyCase {
        pass: report.within(tolerance),
        name,
        tolerance,
        report,
    }
}

pub fn verify(args: &VerifyArgs) -> Result<VerifyReport> {
    if let Some(t) = args.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("--tolerance must be > 0 (got {t})")));
        }
    }
    let atom = AtomSpec::new(VERIFY_ALPHA)?;
    let l = VERIFY_LENGTH;
    let mean_tol = args.tolerance.unwrap_or(0.01);
    let var_tol = args.tolerance.unwrap_or(0.02);
    let all = args.suite == Suite::All;
    let mut cases = Vec::new();

    if all || args.suite == Suite::MeanEnergy {
        let r = mean_energy_modesum(&atom, l, &ModeSumGrid::single_wall())?;
        cases.push(case("single-wall energy, d = 1".into(), mean_tol, r));
    }
    if all || args.suite == Suite::MeanForce {
        let r = mean_force_modesum(&atom, l, &ModeSumGrid::single_wall())?;
        cases.push(case("single-wall force, d = 1".into(), mean_tol, r));
    }
    if all || args.suite == Suite::Variance {
        for x in [0.1, 1.0, 10.0] {
            let window = MeasurementWindow::lorentzian(x * l / CODATA.c)?;
            let r = variance_modesum(&atom, l, &window, &ModeSumGrid::variance())?;
            cases.push(case(
                format!("single-wall force std, cT/d = {x}"),
                var_tol,
                r,
            ));
        }
    }
    if all || args.suite == Suite::TwoWall {
        for frac in [0.25, -0.125] {
            let r = two_wall_force_modesum(&atom, l, frac * l, &ModeSumGrid::two_walls())?;
            cases.push(case(format!("two-wall force, d/L = {frac}"), mean_tol, r));
        }
        let reference = NaturalScales::for_atom(&atom, l)?.force_scale() * 5.0 * PI.powi(4);
        let r = two_wall_force_modesum(&atom, l, 0.0, &ModeSumGrid::two_walls())?;
        cases.push(VerifyCase {
            name: "two-wall force, d = 0 (absolute, 1e-6 of |F(L/4)|)".into(),
            tolerance: mean_tol,
            pass: r.within_absolute(1e-6 * reference),
            report: r,
        });
    }
    Ok(VerifyReport {
        unit_convention: UNIT_CONVENTION.to_owned(),
        suite: args
            .suite
            .to_possible_value()
            .map_or_else(String::new, |v| v.get_name().to_owned()),
        pass: cases.iter().all(|c| c.pass),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sweep_is_ordered_and_hits_endpoints(
            lo in -12.0f64..0.0,
            span in 0.01f64..6.0,
            points in 2usize..200,
            log in any::<bool>(),
        ) {
            let (from, to) = (10f64.powf(lo), 10f64.powf(lo + span));
            let spacing = if log { Spacing::Log } else { Spacing::Linear };
            let p = sweep_points(from, to, points, spacing).unwrap();
            prop_assert_eq!(p.len(), points);
            prop_assert_eq!(p[0], from);
            prop_assert_eq!(p[points - 1], to);
            prop_assert!(p.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(sweep_points(1.0, 2.0, 0, Spacing::Log).is_err());
        assert!(sweep_points(2.0, 1.0, 5, Spacing::Log).is_err());
        assert!(sweep_points(0.0, 1.0, 5, Spacing::Linear).is_err());
        assert!(sweep_points(1.0, 1.0, 3, Spacing::Linear).is_err());
        assert_eq!(
            sweep_points(1.0, 1.0, 1, Spacing::Linear).unwrap(),
            vec![1.0]
        );
    }
}
