use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{solve_with, SolveOptions};
use crate::error::{Error, Result};
use crate::game::{CompetitionRule, GameSpec, Quality, Reputation};
use crate::numeric::{Exact, Number, NumericMode, Scalar};

use super::ratio::{compete_once_predicate, never_compete_threshold, performance_ratio};

/// Parameter grid. An empty `ps` means the Tullock rule; otherwise one
/// fixed-p rule per entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub ks: Vec<u32>,
    pub qs: Vec<Quality>,
    pub ps: Vec<Number>,
    pub start: (Reputation, Reputation),
    pub mode: NumericMode,
}

/// Exact values of a row, as ratio strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactRow {
    pub welfare: String,
    pub optimum: String,
    pub ratio: String,
    pub lower_bound_2q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: u32,
    pub q: Quality,
    pub p: Option<Number>,
    pub start_x1: Reputation,
    pub start_x2: Reputation,
    pub rule: String,
    pub welfare: f64,
    pub optimum: f64,
    pub ratio: f64,
    pub lower_bound_2q: f64,
    /// Threshold predicates for the Tullock game from (1, 1); absent for
    /// other rules and starts.
    pub compete_once: Option<bool>,
    pub never_compete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

fn sort_numbers<T: Clone>(items: &[T], key: impl Fn(&T) -> f64) -> Vec<T> {
    let mut out = items.to_vec();
    out.sort_by(|a, b| key(a).total_cmp(&key(b)));
    out.dedup_by(|a, b| key(a) == key(b));
    out
}

fn row<S: Scalar>(spec: &GameSpec) -> Result<SweepRow> {
    let table = solve_with::<S>(spec, &SolveOptions::default())?;
    let r = performance_ratio(&table)?;
    let exact = (S::MODE == NumericMode::Exact).then(|| ExactRow {
        welfare: r.welfare.encode(),
        optimum: r.optimum.encode(),
        ratio: r.ratio.encode(),
        lower_bound_2q: r.lower_bound_2q.encode(),
    });
    let tullock_from_one_one = matches!(spec.rule(), CompetitionRule::Tullock) && spec.start() == (1, 1);
    Ok(SweepRow {
        k: r.k,
        q: r.q,
        p: r.p,
        start_x1: r.x1,
        start_x2: r.x2,
        rule: r.rule,
        welfare: r.welfare.to_f64(),
        optimum: r.optimum.to_f64(),
        ratio: r.ratio.to_f64(),
        lower_bound_2q: r.lower_bound_2q.to_f64(),
        compete_once: tullock_from_one_one.then(|| compete_once_predicate(spec.k(), spec.q())),
        never_compete: tullock_from_one_one.then(|| never_compete_threshold(spec.k(), spec.q())),
        exact,
    })
}

/// Solve every grid point (root only) in parallel. Rows are ordered by
/// `k`, then `q`, then `p`, each ascending.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.ks.is_empty() || config.qs.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
    }
    if config.ks.contains(&0) {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut ks = config.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    let qs = sort_numbers(&config.qs, Quality::to_f64);
    let rules: Vec<CompetitionRule> = if config.ps.is_empty() {
        vec![CompetitionRule::Tullock]
    } else {
        sort_numbers(&config.ps, Number::to_f64)
            .into_iter()
            .map(CompetitionRule::fixed_p)
            .collect::<Result<_>>()?
    };
    let (x1, x2) = config.start;
    let mut specs = Vec::with_capacity(ks.len() * qs.len() * rules.len());
    for &k in &ks {
        for q in &qs {
            for rule in &rules {
                specs.push(GameSpec::new(k, q.clone(), x1, x2, rule.clone())?);
            }
        }
    }
    let rows = specs
        .par_iter()
        .map(|spec| match config.mode {
            NumericMode::Exact => row::<Exact>(spec),
            NumericMode::Float => row::<f64>(spec),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { config: config.clone(), rows })
}
