//! Tabular and structured exports for sweeps and trajectory logs.
//!
//! Tabular files start with `# `-prefixed header lines carrying the format
//! version, the artifact version and the full configuration as JSON.

use std::io::Write;

use serde::Serialize;

use crate::analysis::SweepReport;
use crate::error::{Error, Result};
use crate::montecarlo::Trajectory;
use crate::persist::{ARTIFACT_VERSION, FORMAT_VERSION};

/// Significant digits used for decimal columns.
pub const SIG_DIGITS: usize = 12;

/// Format like C's `%.12g`: twelve significant digits, trailing zeros
/// dropped, scientific notation outside `[1e-5, 1e12)`.
pub fn format_sig(v: f64) -> String {
    format_sig_digits(v, SIG_DIGITS)
}

pub fn format_sig_digits(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries like 9.99…→10.
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header lines shared by all tabular exports.
pub fn header_lines<C: Serialize>(command: &str, config: &C) -> Result<Vec<String>> {
    let config = serde_json::to_string(config).map_err(|e| Error::Format(e.to_string()))?;
    Ok(vec![
        format!("# format_version: {FORMAT_VERSION}"),
        format!("# artifact: {ARTIFACT_VERSION}"),
        format!("# command: {command}"),
        format!("# config: {config}"),
    ])
}

fn write_header<W: Write>(w: &mut W, lines: &[String]) -> Result<()> {
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Sweep rows as comma-separated text. The `p` column appears only for
/// fixed-p sweeps.
pub fn write_sweep_csv<W: Write>(report: &SweepReport, mut w: W) -> Result<()> {
    write_header(&mut w, &header_lines("sweep", &report.config)?)?;
    let with_p = !report.config.ps.is_empty();
    let mut cols = vec!["k", "q"];
    if with_p {
        cols.push("p");
    }
    cols.extend([
        "start_x1",
        "start_x2",
        "rule",
        "welfare",
        "optimum",
        "ratio",
        "lower_bound_2q",
        "compete_once",
        "never_compete",
    ]);
    writeln!(w, "{}", cols.join(","))?;
    for r in &report.rows {
        let mut fields = vec![r.k.to_string(), format_sig(r.q.to_f64())];
        if with_p {
            fields.push(r.p.as_ref().map_or(String::new(), |p| format_sig(p.to_f64())));
        }
        fields.extend([
            r.start_x1.to_string(),
            r.start_x2.to_string(),
            r.rule.clone(),
            format_sig(r.welfare),
            format_sig(r.optimum),
            format_sig(r.ratio),
            format_sig(r.lower_bound_2q),
            r.compete_once.map_or(String::new(), |b| b.to_string()),
            r.never_compete.map_or(String::new(), |b| b.to_string()),
        ]);
        writeln!(w, "{}", fields.join(","))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, T> {
    format_version: u32,
    artifact: &'a str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Structured export with the same header fields as the tabular files.
/// Exact sweeps carry ratio strings under each row's `exact` key.
pub fn to_json<T: Serialize>(command: &str, body: &T) -> Result<String> {
    let doc = Document { format_version: FORMAT_VERSION, artifact: ARTIFACT_VERSION, command, body };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))
}

/// One line per round per trial.
pub fn write_trajectory_csv<W: Write, C: Serialize>(
    trajectories: &[Trajectory],
    config: &C,
    mut w: W,
) -> Result<()> {
    write_header(&mut w, &header_lines("simulate", config)?)?;
    writeln!(w, "trial,round,profile,winner,x1,x2,payoff1,payoff2")?;
    for t in trajectories {
        for r in &t.rounds {
            let winner = match r.winner {
                crate::game::Player::One => 1,
                crate::game::Player::Two => 2,
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                t.trial,
                r.round,
                r.profile,
                winner,
                r.x1_after,
                r.x2_after,
                format_sig(r.payoff1),
                format_sig(r.payoff2)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
