use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use recruit_core::equilibrium::{EquilibriumTable, Retention};
use recruit_core::montecarlo::{simulate, SimulateOptions};
use recruit_core::persist::TableHeader;
use recruit_core::report::{to_json, write_trajectory_csv};
use recruit_core::{Exact, NumericMode, Scalar};

use crate::args::{parse_int_grid, CacheArgs, GameArgs, GameConfig};
use crate::cache::{self, Cache};
use crate::output::{claim_outputs, write_atomic};
use crate::usage;

const DEFAULT_K: u32 = 6400;
const DEFAULT_Q: &str = "0.2247";

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Rounds at which to histogram player 1's relative reputation
    /// (default k/4, k/2, k).
    #[arg(long)]
    checkpoints: Option<String>,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Write per-round trajectories of the first --log-trials trials here.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    log_trials: u64,
    /// Statistics file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    /// Simulate a table file written by `solve --full --out` instead of solving.
    #[arg(long, conflicts_with_all = ["k", "q", "cache"])]
    table: Option<PathBuf>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Serialize)]
struct Config<'a> {
    game: Option<&'a GameConfig>,
    table: &'a Option<PathBuf>,
    trials: u64,
    seed: u64,
    checkpoints: &'a [u32],
    bins: usize,
    log: &'a Option<PathBuf>,
    log_trials: u64,
}

pub fn run(a: SimulateArgs) -> anyhow::Result<()> {
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if a.bins == 0 {
        return Err(usage("--bins must be at least 1"));
    }
    let outputs: Vec<&PathBuf> = a.out.iter().chain(a.log.iter()).collect();
    claim_outputs(&outputs, a.force)?;
    match &a.table {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
            let header = recruit_core::persist::read_header(std::io::BufReader::new(file))?;
            require_full(&header)?;
            match header.numeric_mode {
                NumericMode::Exact => run_with(&a, None, cache::load_file::<Exact>(path)?),
                NumericMode::Float => run_with(&a, None, cache::load_file::<f64>(path)?),
            }
        }
        None => {
            let game = a.game.resolve(Some(DEFAULT_K), Some(DEFAULT_Q))?;
            let store = a.cache.cache.then(|| Cache::new(&a.cache.cache_dir));
            let spec = game.spec()?;
            match game.numeric_mode {
                NumericMode::Exact => {
                    run_with(&a, Some(&game), cache::obtain::<Exact>(&spec, Retention::Full, store.as_ref())?.0)
                }
                NumericMode::Float => {
                    run_with(&a, Some(&game), cache::obtain::<f64>(&spec, Retention::Full, store.as_ref())?.0)
                }
            }
        }
    }
}

fn require_full(h: &TableHeader) -> anyhow::Result<()> {
    if h.retention != Retention::Full {
        return Err(usage(format!(
            "the table for k = {} keeps only the root layer; simulation needs every state. \
             Re-solve with `recruit solve --full --out FILE`",
            h.k
        )));
    }
    Ok(())
}

fn run_with<S: Scalar>(a: &SimulateArgs, game: Option<&GameConfig>, table: EquilibriumTable<S>) -> anyhow::Result<()> {
    let checkpoints = match &a.checkpoints {
        Some(s) => parse_int_grid(s)?,
        None => Vec::new(),
    };
    let opts = SimulateOptions {
        trials: a.trials,
        master_seed: a.seed,
        checkpoints: checkpoints.clone(),
        histogram_bins: a.bins,
        keep_trajectories: false,
    };
    let stats = simulate(&table, &opts)?.stats;
    let config = Config {
        game,
        table: &a.table,
        trials: a.trials,
        seed: a.seed,
        checkpoints: &checkpoints,
        bins: a.bins,
        log: &a.log,
        log_trials: a.log_trials,
    };

    if let Some(path) = &a.log {
        // Trials draw from independent streams, so the first trials of a
        // shorter run are the first trials of the full run.
        let logged = SimulateOptions { trials: a.log_trials.min(a.trials).max(1), keep_trajectories: true, ..opts };
        let trajectories = simulate(&table, &logged)?.trajectories.unwrap_or_default();
        write_atomic(path, |w| Ok(write_trajectory_csv(&trajectories, &config, w)?))?;
    }

    #[derive(Serialize)]
    struct Doc<'a, T: Serialize> {
        config: &'a Config<'a>,
        table_header: TableHeader,
        stats: &'a T,
    }
    let doc = to_json("simulate", &Doc { config: &config, table_header: TableHeader::of(&table), stats: &stats })?;
    match &a.out {
        Some(path) => write_atomic(path, |w| {
            writeln!(w, "{doc}")?;
            Ok(())
        })?,
        None => println!("{doc}"),
    }
    Ok(())
}
