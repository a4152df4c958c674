use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use recruit_core::analysis::{
    cdf_step_slack, fixed_p_bound_check, fixed_p_gap_check, fixed_p_stop_gap, tullock_bound_check,
};
use recruit_core::equilibrium::{solve_full, structural_checks, verify_spe};
use recruit_core::montecarlo::{reflected_walk_hitting, urn_split_check};
use recruit_core::report::to_json;
use recruit_core::{CompetitionRule, Exact, GameSpec, Number, Quality};

use crate::output::{claim_outputs, write_atomic};
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Spe,
    Structure,
    Bounds,
    Urn,
    Fixedp,
    All,
}

#[derive(Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Largest round count for the equilibrium suites.
    #[arg(long, default_value_t = 6)]
    k: u32,
    /// Contests per urn trial.
    #[arg(long, default_value_t = 10)]
    t: u32,
    /// Monte Carlo trials for the urn and walk checks.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the summary to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

/// Exact qualities for the equilibrium suites.
const Q_GRID: [(i64, i64); 7] = [(1, 10), (1, 4), (2, 5), (1, 2), (3, 5), (4, 5), (9, 10)];
const STARTS: [(u64, u64); 3] = [(1, 1), (2, 1), (1, 3)];
/// (q, p) pairs for the fixed-p gap bound.
const FIXED_P_GRID: [(f64, f64); 5] = [(0.5, 0.25), (0.3, 0.2), (0.7, 0.1), (0.4, 0.35), (0.9, 0.45)];
const URN_MAX_DEVIATION: f64 = 0.01;
const URN_MIN_P_VALUE: f64 = 1e-3;

#[derive(Serialize)]
struct CheckResult {
    name: String,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct SuiteResult {
    suite: Suite,
    passed: bool,
    checks: Vec<CheckResult>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Serialize) -> anyhow::Result<CheckResult> {
    Ok(CheckResult { name: name.into(), passed, detail: serde_json::to_value(detail)? })
}

fn games(max_k: u32) -> anyhow::Result<Vec<GameSpec>> {
    let rules = [CompetitionRule::Tullock, CompetitionRule::fixed_p(Number::ratio(1, 5))?];
    let mut out = Vec::new();
    for k in 1..=max_k {
        for (n, d) in Q_GRID {
            for (x1, x2) in STARTS {
                for rule in &rules {
                    out.push(GameSpec::new(k, Quality::ratio(n, d)?, x1, x2, rule.clone())?);
                }
            }
        }
    }
    Ok(out)
}

fn spe(max_k: u32) -> anyhow::Result<Vec<CheckResult>> {
    let mut states = 0;
    let mut tables = 0;
    for spec in games(max_k)? {
        let r = verify_spe(&solve_full::<Exact>(&spec)?)?;
        if !r.passed() {
            return Ok(vec![check("subgame_perfection", false, json!({ "game": format!("{spec:?}"), "report": r }))?]);
        }
        states += r.states_checked;
        tables += 1;
    }
    Ok(vec![check("subgame_perfection", true, json!({ "tables": tables, "states_checked": states }))?])
}

fn structure(max_k: u32) -> anyhow::Result<Vec<CheckResult>> {
    let mut totals: Vec<(String, u64, u64, Option<Value>)> = Vec::new();
    for spec in games(max_k)? {
        let report = structural_checks(&solve_full::<Exact>(&spec)?)?;
        for c in report.checks {
            let slot = match totals.iter_mut().find(|t| t.0 == c.name) {
                Some(s) => s,
                None => {
                    totals.push((c.name.to_string(), 0, 0, None));
                    totals.last_mut().expect("just pushed")
                }
            };
            slot.1 += c.checked;
            slot.2 += c.violation_count;
            if slot.3.is_none() && !c.violations.is_empty() {
                slot.3 = Some(json!({ "game": format!("{spec:?}"), "witness": c.violations[0] }));
            }
        }
    }
    totals
        .into_iter()
        .map(|(name, checked, violations, first)| {
            check(name, violations == 0, json!({ "checked": checked, "violations": violations, "first": first }))
        })
        .collect()
}

fn bounds() -> anyhow::Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for q in [0.2, 0.3, 0.45] {
        let c = tullock_bound_check(q, 200, 100)?;
        out.push(check(c.name.clone(), c.passed(), &c)?);
    }
    for (q, p) in FIXED_P_GRID {
        let c = fixed_p_bound_check(q, p, 12, 200)?;
        out.push(check(c.name.clone(), c.passed(), &c)?);
    }
    let (mut points, mut min_slack, mut first) = (0u64, f64::INFINITY, None);
    for i in 1..=9u32 {
        let r = f64::from(i) / 10.0;
        for t in 1..=60u64 {
            for x in 0..t {
                let s = cdf_step_slack(r, x, t)?;
                points += 1;
                min_slack = min_slack.min(s);
                if s < -1e-12 && first.is_none() {
                    first = Some(json!({ "r": r, "x": x, "t": t, "slack": s }));
                }
            }
        }
    }
    out.push(check(
        "cdf-step",
        first.is_none(),
        json!({ "checked": points, "min_slack": min_slack, "first_violation": first }),
    )?);
    Ok(out)
}

fn urn(t: u32, trials: u64, seed: u64) -> anyhow::Result<Vec<CheckResult>> {
    let r = urn_split_check(t, (1, 1), trials, seed)?;
    let passed = r.passed(URN_MAX_DEVIATION, URN_MIN_P_VALUE);
    Ok(vec![check("uniform-split", passed, &r)?])
}

fn fixedp(trials: u64, seed: u64) -> anyhow::Result<Vec<CheckResult>> {
    let (q, p) = (0.5, 0.25);
    let mut out = Vec::new();
    for k in [250u32, 1000] {
        let c = fixed_p_gap_check(q, p, k)?;
        out.push(check(format!("stop-gap k={k}"), c.passed(), &c)?);
        let d = fixed_p_stop_gap(q, p, u64::from(k))?;
        let w = reflected_walk_hitting(d, p, trials.min(20_000), seed)?;
        out.push(check(format!("hitting-time d={d}"), w.mean <= w.bound, &w)?);
    }
    Ok(out)
}

pub fn run(a: VerifyArgs) -> anyhow::Result<()> {
    if a.k < 1 || a.t < 1 || a.trials < 1 {
        return Err(crate::usage("--k, --t and --trials must be at least 1"));
    }
    if let Some(out) = &a.out {
        claim_outputs(&[out], a.force)?;
    }
    let suites = match a.suite {
        Suite::All => vec![Suite::Spe, Suite::Structure, Suite::Bounds, Suite::Urn, Suite::Fixedp],
        s => vec![s],
    };
    let mut results = Vec::new();
    for suite in suites {
        let checks = match suite {
            Suite::Spe => spe(a.k)?,
            Suite::Structure => structure(a.k)?,
            Suite::Bounds => bounds()?,
            Suite::Urn => urn(a.t, a.trials, a.seed)?,
            Suite::Fixedp => fixedp(a.trials, a.seed)?,
            Suite::All => unreachable!(),
        };
        results.push(SuiteResult { suite, passed: checks.iter().all(|c| c.passed), checks });
    }
    let passed = results.iter().all(|s| s.passed);

    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a VerifyArgs,
        passed: bool,
        suites: &'a [SuiteResult],
    }
    let doc = to_json("verify", &Doc { config: &a, passed, suites: &results })?;
    println!("{doc}");
    if let Some(out) = &a.out {
        write_atomic(out, |w| {
            use std::io::Write;
            writeln!(w, "{doc}")?;
            Ok(())
        })?;
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<String> =
            results.iter().flat_map(|s| s.checks.iter()).filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        Err(Failure::Check(format!("failed checks: {}", failed.join(", "))).into())
    }
}
