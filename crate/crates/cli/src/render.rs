use std::io::Write;

use serde::Serialize;

use crate::args::Format;
use crate::report::*;
use crate::CliError;

type Result = std::result::Result<(), CliError>;

/// Header of the scan table.
pub const SCAN_HEADER: [&str; 7] = [
    "param",
    "mean_force_N",
    "std_N",
    "relative",
    "asym_small_d",
    "asym_large_d",
    "regime",
];

pub fn json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Shortest round-trip scientific notation; never locale dependent.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(
        || "n/a (no polarizability given)".to_owned(),
        |v| format!("{} N", num(v)),
    )
}

fn banner(w: &mut dyn Write, convention: &str) -> Result {
    writeln!(
        w,
        "# unit convention: {convention} (alpha is a volume, m^3)"
    )?;
    Ok(())
}

fn text_only(format: Format) -> std::result::Result<(), CliError> {
    match format {
        Format::Csv => Err(CliError::Format("csv")),
        _ => Ok(()),
    }
}

pub fn force(r: &ForceReport, format: Format, w: &mut dyn Write) -> Result {
    text_only(format)?;
    if format == Format::Json {
        return json(r, w);
    }
    banner(w, &r.unit_convention)?;
    writeln!(w, "geometry: {:?}", r.geometry)?;
    writeln!(w, "mean force: {}", opt(r.force_n))?;
    if let Some(l) = r.log_abs_force_n {
        writeln!(w, "ln|F/N|: {l:.6}")?;
    }
    writeln!(
        w,
        "mean force (natural): {} hbar*c*alpha/l^5, l = {} m",
        num(r.force_natural),
        num(r.natural_length_m)
    )?;
    writeln!(w, "direction: {}", r.direction)?;
    Ok(())
}

pub fn fluct(r: &FluctReport, format: Format, w: &mut dyn Write) -> Result {
    text_only(format)?;
    if format == Format::Json {
        return json(r, w);
    }
    match r {
        FluctReport::SingleWall(s) => {
            banner(w, &s.unit_convention)?;
            writeln!(
                w,
                "single wall, d = {} m, T = {} s",
                num(s.distance_m),
                num(s.time_s)
            )?;
            writeln!(w, "x = cT/d: {} ({})", num(s.x), s.regime)?;
            writeln!(w, "mean force: {}", opt(s.mean_force_n))?;
            writeln!(w, "force std: {}", opt(s.std_n))?;
            writeln!(
                w,
                "force std (natural): {} hbar*c*alpha/d^5",
                num(s.std_natural)
            )?;
            writeln!(w, "relative fluctuation: {}", num(s.relative))?;
            writeln!(w, "ln relative: {:.9}", s.log_relative)?;
            writeln!(w, "asymptote d << cT: {}", num(s.asym_small_d))?;
            writeln!(w, "asymptote d >> cT: {}", num(s.asym_large_d))?;
        }
        FluctReport::TwoWalls(t) => {
            banner(w, &t.unit_convention)?;
            writeln!(
                w,
                "two walls, L = {} m, d = {} m, T = {} s",
                num(t.gap_m),
                num(t.offset_m),
                num(t.time_s)
            )?;
            writeln!(w, "cT/L: {} (valid: {})", num(t.ct_over_gap), t.valid)?;
            writeln!(w, "relative fluctuation: {}", num(t.relative))?;
            writeln!(w, "ln relative: {}", num(t.log_relative))?;
            writeln!(w, "log10 relative: {}", num(t.log10_relative))?;
            if let Some(n) = &t.note {
                writeln!(w, "note: {n}")?;
            }
        }
    }
    Ok(())
}

pub fn scan(r: &ScanReport, format: Format, w: &mut dyn Write) -> Result {
    if format == Format::Json {
        return json(r, w);
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SCAN_HEADER)?;
    for row in &r.rows {
        out.write_record([
            num(row.param),
            row.mean_force_n.map(num).unwrap_or_default(),
            row.std_n.map(num).unwrap_or_default(),
            num(row.relative),
            num(row.asym_small_d),
            num(row.asym_large_d),
            row.regime.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn crossover(r: &CrossoverReport, format: Format, w: &mut dyn Write) -> Result {
    text_only(format)?;
    if format == Format::Json {
        return json(r, w);
    }
    let c = &r.crossover;
    banner(w, &r.unit_convention)?;
    writeln!(w, "distance: {} m", num(c.distance))?;
    writeln!(w, "crossover time T*: {} s", num(c.time))?;
    writeln!(w, "cT*/d: {}", num(c.x))?;
    writeln!(w, "d/cT*: {}", num(c.distance_over_ct))?;
    writeln!(w, "residual |relative(T*) - 1|: {}", num(c.residual))?;
    writeln!(
        w,
        "estimate from d << cT asymptote: {} s",
        num(c.small_d_estimate)
    )?;
    writeln!(
        w,
        "estimate from d >> cT asymptote: {} s",
        num(c.large_d_estimate)
    )?;
    Ok(())
}

pub fn experiment(r: &ExperimentReport, format: Format, w: &mut dyn Write) -> Result {
    text_only(format)?;
    if format == Format::Json {
        return json(r, w);
    }
    banner(w, &r.unit_convention)?;
    writeln!(w, "mean speed: {} m/s", num(r.mean_speed_m_s))?;
    writeln!(w, "transit time T: {} s", num(r.time_s))?;
    writeln!(w, "cT/L: {} (valid: {})", num(r.ct_over_gap), r.valid)?;
    writeln!(
        w,
        "relative fluctuation exceeds 1 for |d| < exp({}) m",
        num(r.threshold.log_offset)
    )?;
    writeln!(
        w,
        "log10 relative at d = 1e-10 m: {}",
        num(r.at_1e_10_m.log10_relative)
    )?;
    for p in &r.sweep {
        writeln!(
            w,
            "  d = {} m: log10 relative {}",
            num(p.offset_m),
            num(p.log10_relative)
        )?;
    }
    writeln!(w, "verdict: {}", r.verdict)?;
    Ok(())
}

pub fn worst_case(r: &VerifyReport) -> Option<String> {
    r.cases
        .iter()
        .filter(|c| !c.pass)
        .max_by(|a, b| {
            let ea = a.report.relative_error.unwrap_or(f64::INFINITY);
            let eb = b.report.relative_error.unwrap_or(f64::INFINITY);
            ea.total_cmp(&eb)
        })
        .map(|c| serde_json::to_string(c).unwrap_or_else(|_| c.name.clone()))
}

pub fn verify(r: &VerifyReport, format: Format, w: &mut dyn Write) -> Result {
    text_only(format)?;
    if format == Format::Json {
        return json(r, w);
    }
    banner(w, &r.unit_convention)?;
    for c in &r.cases {
        let err = c.report.relative_error.map_or_else(
            || format!("abs err {}", num(c.report.absolute_error)),
            |e| format!("rel err {}", num(e)),
        );
        writeln!(
            w,
            "[{}] {}: oracle {} {} vs closed form {} ({err}, tol {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            num(c.report.value),
            c.report.unit,
            num(c.report.closed_form),
            c.tolerance
        )?;
    }
    writeln!(
        w,
        "suite {}: {}",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" }
    )?;
    Ok(())
}
