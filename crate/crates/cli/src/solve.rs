use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use recruit_core::analysis::performance_ratio;
use recruit_core::equilibrium::{EquilibriumTable, Retention};
use recruit_core::persist::{read_header, write_table};
use recruit_core::report::{format_sig, header_lines, to_json};
use recruit_core::{Exact, NumericMode, Scalar};

use crate::args::{CacheArgs, GameArgs, GameConfig};
use crate::cache::{self, Cache, Source};
use crate::output::{claim_outputs, header_text, write_atomic};
use crate::usage;

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Keep every state instead of only the root layer.
    #[arg(long)]
    full: bool,
    /// Write the table to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite an existing --out file.
    #[arg(long)]
    force: bool,
    /// Load a table file instead of solving; game flags are then ignored.
    #[arg(long, conflicts_with_all = ["k", "q", "full", "cache"])]
    table: Option<PathBuf>,
    /// Print a JSON document instead of key: value lines.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    game: &'a GameConfig,
    retention: Retention,
    out: &'a Option<PathBuf>,
    table: &'a Option<PathBuf>,
    cache: bool,
    cache_dir: &'a PathBuf,
}

#[derive(Serialize)]
struct Summary {
    welfare: String,
    optimum: String,
    ratio: String,
    lower_bound_2q: String,
    root_profile: String,
    retained_states: usize,
    competing_states: Option<usize>,
    cache: &'static str,
}

pub fn run(a: SolveArgs) -> anyhow::Result<()> {
    if let Some(out) = &a.out {
        claim_outputs(&[out], a.force)?;
    }
    let (game, retention) = match &a.table {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
            let h = read_header(std::io::BufReader::new(file))?;
            let spec = h.spec()?;
            let game = GameConfig {
                k: spec.k(),
                q: h.q,
                x1: h.x1,
                x2: h.x2,
                rule: if h.p.is_some() { crate::args::RuleArg::FixedP } else { crate::args::RuleArg::Tullock },
                p: h.p,
                numeric_mode: h.numeric_mode,
            };
            (game, h.retention)
        }
        None => (a.game.resolve(None, None)?, if a.full { Retention::Full } else { Retention::RootOnly }),
    };
    match game.numeric_mode {
        NumericMode::Exact => run_with::<Exact>(&a, &game, retention),
        NumericMode::Float => run_with::<f64>(&a, &game, retention),
    }
}

fn show<S: Scalar>(v: &S) -> String {
    match S::MODE {
        NumericMode::Exact => v.encode(),
        NumericMode::Float => format_sig(v.to_f64()),
    }
}

fn run_with<S: Scalar>(a: &SolveArgs, game: &GameConfig, retention: Retention) -> anyhow::Result<()> {
    let (table, source): (EquilibriumTable<S>, Source) = match &a.table {
        Some(path) => (cache::load_file(path)?, Source::Solved),
        None => {
            let store = a.cache.cache.then(|| Cache::new(&a.cache.cache_dir));
            cache::obtain(&game.spec()?, retention, store.as_ref())?
        }
    };
    let report = performance_ratio(&table)?;
    let summary = Summary {
        welfare: show(&report.welfare),
        optimum: show(&report.optimum),
        ratio: show(&report.ratio),
        lower_bound_2q: show(&report.lower_bound_2q),
        root_profile: table.root().profile.map_or("--".into(), |p| p.code().to_string()),
        retained_states: table.retained_state_count(),
        competing_states: table.is_full().then(|| table.compete_count()),
        cache: source.as_str(),
    };
    let config = Config {
        game,
        retention,
        out: &a.out,
        table: &a.table,
        cache: a.cache.cache,
        cache_dir: &a.cache.cache_dir,
    };

    if let Some(out) = &a.out {
        write_atomic(out, |w| Ok(write_table(&table, w)?))?;
    }

    let mut stdout = std::io::stdout().lock();
    if a.json {
        #[derive(Serialize)]
        struct Doc<'a> {
            config: &'a Config<'a>,
            #[serde(flatten)]
            summary: &'a Summary,
        }
        writeln!(stdout, "{}", to_json("solve", &Doc { config: &config, summary: &summary })?)?;
    } else {
        write!(stdout, "{}", header_text(&header_lines("solve", &config)?))?;
        writeln!(stdout, "welfare: {}", summary.welfare)?;
        writeln!(stdout, "optimum: {}", summary.optimum)?;
        writeln!(stdout, "ratio: {}", summary.ratio)?;
        writeln!(stdout, "lower_bound_2q: {}", summary.lower_bound_2q)?;
        writeln!(stdout, "root_profile: {}", summary.root_profile)?;
        writeln!(stdout, "retained_states: {}", summary.retained_states)?;
        if let Some(c) = summary.competing_states {
            writeln!(stdout, "competing_states: {c}")?;
        }
        writeln!(stdout, "cache: {}", summary.cache)?;
    }
    Ok(())
}
