//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --test acceptance -- 2 5`.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use recruit_core::analysis::{
    compete_once_predicate, compete_once_ratio, fixed_p_bound_check, fixed_p_gap_check, fixed_p_stop_gap,
    limit_ratio, performance_ratio, prop32_ratio, split_distribution, sweep, t_binding_welfare, tullock_bound_check,
    cdf_step_slack, cdf_step_slack_exact, SweepConfig,
};
use recruit_core::equilibrium::{brute_force_oracle, solve, solve_full, structural_checks, verify_spe};
use recruit_core::montecarlo::{simulate, urn_split_check, SimulateOptions};
use recruit_core::{ActionProfile, CompetitionRule, Exact, GameSpec, Number, NumericMode, Quality, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn q_exact(n: i64, d: i64) -> Quality {
    Quality::ratio(n, d).unwrap()
}

fn rules() -> [CompetitionRule; 2] {
    [CompetitionRule::Tullock, CompetitionRule::fixed_p(Number::ratio(1, 5)).unwrap()]
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for k in 0..=6u32 {
        for (n, d) in [(1, 4), (2, 5), (3, 5), (4, 5)] {
            for (x1, x2) in [(1, 1), (2, 1), (1, 3)] {
                for rule in rules() {
                    let spec = GameSpec::new(k, q_exact(n, d), x1, x2, rule).map_err(err)?;
                    let table = solve_full::<Exact>(&spec).map_err(err)?;
                    // Every state of the table is the root of its own subgame.
                    for (key, v) in table.states() {
                        let sub = GameSpec::new(key.remaining, spec.q().clone(), key.x1, key.x2, spec.rule().clone())
                            .map_err(err)?;
                        let (o1, o2) = brute_force_oracle(&sub).map_err(err)?;
                        ensure(o1 == v.u1 && o2 == v.u2, format!("mismatch at {key:?} of {spec:?}"))?;
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} states equal the oracle exactly"))
}

fn hand_instance() -> Outcome {
    let q = q_exact(3, 5);
    let spec = GameSpec::tullock(2, q.clone());
    let table = solve_full::<Exact>(&spec).map_err(err)?;
    let report = performance_ratio(&table).map_err(err)?;
    ensure(report.welfare == Exact::ratio(13, 5), format!("welfare {}", report.welfare))?;
    ensure(report.ratio == Exact::ratio(13, 16), format!("ratio {}", report.ratio))?;
    ensure(table.root().profile == Some(ActionProfile::Compete), "root does not compete")?;
    for x1 in [1, 2] {
        let p = table.profile(1, x1).ok_or("missing depth-1 state")?;
        ensure(!p.is_compete(), format!("depth-1 state x1={x1} competes"))?;
    }
    let (o1, o2) = brute_force_oracle(&spec).map_err(err)?;
    ensure(o1 + o2 == Exact::ratio(13, 5), "oracle welfare differs")?;
    ensure(compete_once_predicate(2, &q), "outside the compete-once window")?;
    ensure(compete_once_ratio(2, &Exact::ratio(3, 5)) == report.ratio, "compete-once closed form differs")?;
    let p32 = prop32_ratio::<Exact>(&q).map_err(err)?;
    ensure(p32.k_q == 2 && p32.closed_form == report.ratio, "worst-k closed form differs")?;
    Ok("welfare 13/5, ratio 13/16 = 0.8125, root ++, depth 1 +- / -+".into())
}

fn ratio_lower_bounds() -> Outcome {
    let config = SweepConfig {
        ks: (1..=200).collect(),
        qs: (1..=19).map(|i| Quality::decimal(i as f64 * 0.05).unwrap()).collect(),
        ps: vec![],
        start: (1, 1),
        mode: NumericMode::Float,
    };
    let report = sweep(&config).map_err(err)?;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for r in &report.rows {
        let q = r.q.to_f64();
        if r.ratio < 2.0 * q / (1.0 + q) - 1e-9 || r.ratio < 2.0 / 3.0 - 1e-9 || r.ratio > 1.0 + 1e-9 {
            violations += 1;
        }
        worst = worst.min(r.ratio - 2.0 * q / (1.0 + q));
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{} games, min ratio − 2q/(1+q) = {worst:.3e}", report.rows.len()))
}

fn never_compete() -> Outcome {
    for k in 1..=50u32 {
        let q = q_exact(k as i64, k as i64 + 1);
        let table = solve_full::<Exact>(&GameSpec::tullock(k, q)).map_err(err)?;
        ensure(table.compete_count() == 0, format!("k={k}: {} competing states", table.compete_count()))?;
        let r = performance_ratio(&table).map_err(err)?;
        ensure(r.ratio == <Exact as Scalar>::one(), format!("k={k}: ratio {}", r.ratio))?;
    }
    Ok("k = 1..50: no competing state, ratio exactly 1".into())
}

fn compete_once() -> Outcome {
    let mut games = Vec::new();
    for (n, d) in [(11, 20), (3, 5), (13, 20), (7, 10)] {
        let q = q_exact(n, d);
        for k in (1..=20u32).filter(|&k| compete_once_predicate(k, &q)) {
            let table = solve_full::<Exact>(&GameSpec::tullock(k, q.clone())).map_err(err)?;
            ensure(table.root().profile == Some(ActionProfile::Compete), format!("q={q} k={k}: root does not compete"))?;
            let deeper = table.states().filter(|(s, v)| s.remaining < k && v.profile.is_some_and(|p| p.is_compete())).count();
            ensure(deeper == 0, format!("q={q} k={k}: {deeper} deeper competing states"))?;
            let ratio = performance_ratio(&table).map_err(err)?.ratio;
            let closed = compete_once_ratio(k, &q.value::<Exact>().map_err(err)?);
            ensure(ratio == closed, format!("q={q} k={k}: ratio {ratio} vs {closed}"))?;
            games.push(format!("q={q} k={k}"));
        }
    }
    ensure(games.len() == 4, format!("expected 4 window games, found {games:?}"))?;
    Ok(games.join(", "))
}

fn spe_suite() -> Outcome {
    let qs = [(1, 10), (1, 4), (2, 5), (1, 2), (3, 5), (4, 5), (9, 10)];
    let mut states = 0;
    let mut tables = 0;
    for k in 1..=12u32 {
        for (n, d) in qs {
            for (x1, x2) in [(1, 1), (2, 1), (1, 3)] {
                for rule in rules() {
                    let spec = GameSpec::new(k, q_exact(n, d), x1, x2, rule).map_err(err)?;
                    let table = solve_full::<Exact>(&spec).map_err(err)?;
                    let spe = verify_spe(&table).map_err(err)?;
                    ensure(spe.passed(), format!("{spec:?}: {:?}", spe.violation))?;
                    let s = structural_checks(&table).map_err(err)?;
                    if let Some(c) = s.checks.iter().find(|c| !c.passed()) {
                        return Err(format!("{spec:?}: {} fails at {:?}", c.name, c.violations.first()));
                    }
                    states += spe.states_checked;
                    tables += 1;
                }
            }
        }
    }
    Ok(format!("{tables} tables, {states} decision states, all five structural checks"))
}

fn binding_never_helps() -> Outcome {
    let mut worst = f64::INFINITY;
    for q in [0.2247, 0.4, 0.6] {
        let table = solve_full::<f64>(&GameSpec::tullock(100, Quality::decimal(q).unwrap())).map_err(err)?;
        let base = table.root_welfare();
        for t in 0..100 {
            let w = t_binding_welfare(&table, t).map_err(err)?;
            ensure(base >= w - 1e-9, format!("q={q} t={t}: {base} < {w}"))?;
            worst = worst.min(base - w);
        }
    }
    Ok(format!("k=100, t=0..99, min welfare − binding welfare = {worst:.3e}"))
}

fn urn_law() -> Outcome {
    let law = split_distribution::<Exact>(&CompetitionRule::Tullock, 1, 1, 10).map_err(err)?;
    ensure(law.len() == 11 && law.iter().all(|p| *p == Exact::ratio(1, 11)), "exact law is not uniform 1/11")?;
    let mc = urn_split_check(10, (1, 1), 100_000, 2024).map_err(err)?;
    ensure(mc.max_abs_deviation < 0.01, format!("max deviation {}", mc.max_abs_deviation))?;
    Ok(format!(
        "exact 1/11 per bin; 1e5 trials: max deviation {:.4}, chi² = {:.2} (p = {:.3})",
        mc.max_abs_deviation, mc.chi_square, mc.p_value
    ))
}

fn long_game_limit() -> Outcome {
    let q = 0.2247;
    let quality = Quality::decimal(q).unwrap();
    let spec = GameSpec::tullock(6400, quality);
    let table = solve_full::<f64>(&spec).map_err(err)?;
    let ratio = performance_ratio(&table).map_err(err)?.ratio;
    let limit = limit_ratio(q).map_err(err)?;
    let opts = SimulateOptions { trials: 200_000, master_seed: 6400, ..Default::default() };
    let stats = simulate(&table, &opts).map_err(err)?.stats;
    let target = 2.0 * q;
    let detail = format!(
        "ratio(6400) = {ratio:.4} (limit {limit:.4}); stop fraction {:.4} vs 2r̂ = {target:.4}",
        stats.stop_fraction
    );
    ensure((ratio - 0.8990).abs() <= 0.05, format!("ratio out of band: {detail}"))?;
    ensure((stats.stop_fraction - target).abs() <= 0.05, format!("stop fraction out of band: {detail}"))?;
    Ok(detail)
}

fn high_q_limit() -> Outcome {
    let q = Quality::decimal(0.6).unwrap();
    let r200 = performance_ratio(&solve::<f64>(&GameSpec::tullock(200, q.clone())).map_err(err)?).map_err(err)?.ratio;
    let r2000 = performance_ratio(&solve::<f64>(&GameSpec::tullock(2000, q)).map_err(err)?).map_err(err)?.ratio;
    let detail = format!("ratio(200) = {r200:.5}, ratio(2000) = {r2000:.5}");
    ensure(r2000 >= r200 && r2000 >= 0.98, detail.clone())?;
    Ok(detail)
}

fn bounds() -> Outcome {
    let mut parts = Vec::new();
    for q in [0.2, 0.3, 0.45] {
        let c = tullock_bound_check(q, 200, 100).map_err(err)?;
        ensure(c.passed() && c.checked > 0, format!("{}: {:?}", c.name, c.first_violation))?;
        parts.push(format!("{} ({} points)", c.name, c.checked));
    }
    for (q, p) in [(0.5, 0.25), (0.3, 0.2), (0.7, 0.1), (0.4, 0.35), (0.9, 0.45)] {
        let c = fixed_p_bound_check(q, p, 12, 200).map_err(err)?;
        ensure(c.passed(), format!("{}: {:?}", c.name, c.first_violation))?;
    }
    parts.push("fixed-p gap bound on 5 (q, p) pairs, d ≤ 12, k ≤ 200".into());
    let mut cdf_points = 0;
    for i in 1..=9u64 {
        let r = i as f64 / 10.0;
        let r_exact = Exact::ratio(i, 10);
        for t in 1..=60u64 {
            for x in 0..t {
                let slack = cdf_step_slack(r, x, t).map_err(err)?;
                ensure(slack >= -1e-12, format!("cdf step fails at r={r} x={x} t={t}: {slack}"))?;
                if t <= 30 {
                    let exact = cdf_step_slack_exact(&r_exact, x, t).map_err(err)?;
                    ensure(exact >= <Exact as Scalar>::zero(), format!("exact cdf step fails at r={r} x={x} t={t}"))?;
                }
                cdf_points += 1;
            }
        }
    }
    parts.push(format!("cdf step inequality at {cdf_points} points"));
    Ok(parts.join("; "))
}

fn fixed_p() -> Outcome {
    let (q, p) = (0.5, 0.25);
    let mut gaps = Vec::new();
    let mut last_gap = f64::INFINITY;
    for k in [250u32, 1000, 4000] {
        let gap = fixed_p_gap_check(q, p, k).map_err(err)?;
        ensure(gap.passed(), format!("k={k}: {} competing states beyond d* = {}", gap.competing_beyond, gap.d_star))?;
        let spec = GameSpec::new(k, Quality::decimal(q).unwrap(), 1, 1, CompetitionRule::fixed_p(Number::decimal(p)).unwrap())
            .map_err(err)?;
        let table = solve_full::<f64>(&spec).map_err(err)?;
        let ratio = performance_ratio(&table).map_err(err)?.ratio;
        let stats = simulate(&table, &SimulateOptions { trials: 20_000, master_seed: k as u64, ..Default::default() })
            .map_err(err)?
            .stats;
        let d_star = fixed_p_stop_gap(q, p, k as u64).map_err(err)?;
        let bound = d_star as f64 / (1.0 - 2.0 * p);
        ensure(
            stats.mean_stop_round <= bound,
            format!("k={k}: mean stop round {} > {bound}", stats.mean_stop_round),
        )?;
        let gap_to_one = 1.0 - ratio;
        ensure(gap_to_one < last_gap, format!("k={k}: 1 − ratio = {gap_to_one} did not decrease"))?;
        last_gap = gap_to_one;
        gaps.push(format!("k={k}: d*={d_star}, mean stop {:.2} ≤ {bound}, 1−ratio {gap_to_one:.5}", stats.mean_stop_round));
    }
    ensure(last_gap <= 0.02, format!("1 − ratio(4000) = {last_gap}"))?;
    Ok(gaps.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", oracle_equivalence),
        ("hand-verifiable instance", hand_instance),
        ("ratio lower bounds", ratio_lower_bounds),
        ("never-compete threshold", never_compete),
        ("compete-once window", compete_once),
        ("equilibrium and structure", spe_suite),
        ("binding never helps", binding_never_helps),
        ("urn law", urn_law),
        ("long-game limit", long_game_limit),
        ("high-q limit", high_q_limit),
        ("bounds", bounds),
        ("fixed-p", fixed_p),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &result {
            Ok(detail) => format!("criterion {n:>2} PASS  {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                format!("criterion {n:>2} FAIL  {name} [{secs:.1}s]: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        writeln!(out, "{failed} criteria failed").unwrap();
        ExitCode::FAILURE
    }
}
