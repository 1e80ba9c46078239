//! CSV emission. Every file opens with `#` comment lines carrying the crate
//! version and the run configuration, followed by a header row.

use std::io::{self, Write};

use super::formulas::DegreeFit;
use super::jj::JJScan;
use super::lifetime::{DecayCurve, LifetimeResult};
use super::threshold::ThresholdResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Six significant digits, shortest form (`%g`-style).
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn table<W: Write>(w: &mut W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()
}

/// Writes the comment preamble: version line, then `key: value` lines.
pub fn write_preamble<W: Write>(w: &mut W, meta: &[(&str, String)]) -> io::Result<()> {
    writeln!(w, "# toric-core {VERSION}")?;
    for (k, v) in meta {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

pub fn write_threshold_csv<W: Write>(w: &mut W, r: &ThresholdResult, meta: &[(&str, String)]) -> io::Result<()> {
    write_preamble(w, meta)?;
    writeln!(w, "# p_c: {} ± {} (95% CI {} to {})", sig6(r.p_c), sig6(r.p_c_err), sig6(r.ci.0), sig6(r.ci.1))?;
    table(
        w,
        &["family", "sector", "L", "p", "n_success", "n_total", "seed"],
        r.points.iter().map(|p| {
            vec![
                r.family.to_string(),
                r.sector.to_string(),
                p.linear_size.to_string(),
                sig6(p.p),
                p.n_success.to_string(),
                p.n_total.to_string(),
                r.seed.to_string(),
            ]
        }),
    )
}

pub fn write_decay_csv<W: Write>(w: &mut W, curves: &[DecayCurve], meta: &[(&str, String)]) -> io::Result<()> {
    write_preamble(w, meta)?;
    table(
        w,
        &["family", "sector", "L", "T_over_J", "t", "mean_logical", "stderr", "n_runs"],
        curves.iter().flat_map(|c| {
            (0..c.times.len()).map(move |k| {
                vec![
                    c.family.clone(),
                    c.sector.clone(),
                    c.linear_size.to_string(),
                    sig6(c.t_over_j),
                    sig6(c.times[k]),
                    sig6(c.mean[k]),
                    sig6(c.stderr[k]),
                    c.n_runs.to_string(),
                ]
            })
        }),
    )
}

pub fn write_lifetime_csv<W: Write>(w: &mut W, results: &[LifetimeResult], meta: &[(&str, String)]) -> io::Result<()> {
    write_preamble(w, meta)?;
    for r in results {
        let sens: Vec<String> = r
            .sensitivity
            .iter()
            .map(|(c, t)| format!("{}→{}", sig6(*c), t.map_or("none".into(), sig6)))
            .collect();
        writeln!(w, "# sensitivity {} {} L={} T/J={}: {}", r.family, r.sector, r.linear_size, sig6(r.t_over_j), sens.join(", "))?;
    }
    table(
        w,
        &["family", "sector", "L", "T_over_J", "tau", "tau_err", "criterion"],
        results.iter().map(|r| {
            vec![
                r.family.clone(),
                r.sector.clone(),
                r.linear_size.to_string(),
                sig6(r.t_over_j),
                sig6(r.tau),
                sig6(r.tau_err),
                sig6(r.criterion),
            ]
        }),
    )
}

pub fn write_fit_csv<W: Write>(w: &mut W, fit: &DegreeFit, meta: &[(&str, String)]) -> io::Result<()> {
    write_preamble(w, meta)?;
    table(
        w,
        &["q", "p_c", "p_c_err", "mu", "nu", "residual"],
        fit.points
            .iter()
            .zip(&fit.residuals)
            .map(|(p, res)| vec![sig6(p.q), sig6(p.p_c), sig6(p.p_c_err), sig6(fit.mu), sig6(fit.nu), sig6(*res)]),
    )
}

pub fn write_jj_csv<W: Write>(w: &mut W, scans: &[JJScan], meta: &[(&str, String)]) -> io::Result<()> {
    write_preamble(w, meta)?;
    for s in scans {
        let sims: Vec<String> = s
            .rows
            .iter()
            .filter_map(|r| r.simulated_tau_p.map(|t| format!("q={} tau_p={}", sig6(r.q), sig6(t))))
            .collect();
        writeln!(w, "# x={} T={} alpha={} best_q={}", sig6(s.x), sig6(s.t), sig6(s.alpha), sig6(s.best_q))?;
        if !sims.is_empty() {
            writeln!(w, "# simulated: {}", sims.join(", "))?;
        }
    }
    table(
        w,
        &["x", "T", "q", "q_bar", "Jv_over_Ec", "Jf_over_Ec", "tau_p", "tau_d", "coherence", "simulated_flag"],
        scans.iter().flat_map(|s| {
            s.rows.iter().map(move |r| {
                vec![
                    sig6(s.x),
                    sig6(s.t),
                    sig6(r.q),
                    sig6(r.q_bar),
                    sig6(r.jv_over_ec),
                    sig6(r.jf_over_ec),
                    sig6(r.tau_p),
                    sig6(r.tau_d),
                    sig6(r.coherence),
                    (r.simulated_tau_p.is_some() as u8).to_string(),
                ]
            })
        }),
    )
}
