use std::path::PathBuf;

use clap::Args;

use recruit_core::analysis::{sweep, SweepConfig};
use recruit_core::report::{to_json, write_sweep_csv};
use recruit_core::Quality;

use crate::args::{mode, parse_int_grid, parse_number_grid, parse_start};
use crate::output::{claim_outputs, write_atomic};
use crate::usage;

#[derive(Args)]
pub struct SweepArgs {
    /// Round counts: comma list and ranges, e.g. "1..200" or "100,400,1600".
    #[arg(long)]
    ks: String,
    /// Qualities: comma list and ranges, e.g. "0.05..0.95:0.05" or "1/4,3/5".
    #[arg(long)]
    qs: String,
    /// Fixed-p win probabilities. Omit for the Tullock rule.
    #[arg(long)]
    ps: Option<String>,
    /// Starting reputations.
    #[arg(long, default_value = "1,1")]
    start: String,
    #[arg(long)]
    exact: bool,
    /// CSV output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON output file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

pub fn run(a: SweepArgs) -> anyhow::Result<()> {
    let ks = parse_int_grid(&a.ks)?;
    let qs = parse_number_grid("qs", &a.qs, a.exact)?
        .into_iter()
        .map(|q| Quality::new(q).map_err(|e| usage(format!("--qs: {e}"))))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let ps = match &a.ps {
        Some(ps) => {
            let ps = parse_number_grid("ps", ps, a.exact)?;
            if ps.is_empty() {
                return Err(usage("--ps is empty"));
            }
            ps
        }
        None => Vec::new(),
    };
    if ks.is_empty() || qs.is_empty() {
        return Err(usage("sweep grids must be non-empty"));
    }
    if ks.contains(&0) {
        return Err(usage("round counts must be at least 1"));
    }
    let outputs: Vec<&PathBuf> = a.out.iter().chain(a.json.iter()).collect();
    claim_outputs(&outputs, a.force)?;

    let config = SweepConfig { ks, qs, ps, start: parse_start(&a.start)?, mode: mode(a.exact) };
    let report = sweep(&config).map_err(|e| match e {
        recruit_core::Error::InvalidParameter(m) => usage(m),
        e => e.into(),
    })?;
    match &a.out {
        Some(path) => write_atomic(path, |w| Ok(write_sweep_csv(&report, w)?))?,
        None => write_sweep_csv(&report, std::io::stdout().lock())?,
    }
    if let Some(path) = &a.json {
        let doc = to_json("sweep", &report)?;
        write_atomic(path, |w| {
            use std::io::Write;
            writeln!(w, "{doc}")?;
            Ok(())
        })?;
    }
    Ok(())
}
