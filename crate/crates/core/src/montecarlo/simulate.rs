use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::EquilibriumTable;
use crate::error::{Error, Result};
use crate::game::{ActionProfile, Player, Reputation, ResolvedRule};
use crate::numeric::Scalar;

use super::trial_rng;

#[derive(Clone, Debug)]
pub struct SimulateOptions {
    pub trials: u64,
    pub master_seed: u64,
    /// Rounds after which player 1's relative reputation is histogrammed.
    /// Empty means `k/4`, `k/2` and `k`.
    pub checkpoints: Vec<u32>,
    pub histogram_bins: usize,
    pub keep_trajectories: bool,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            trials: 10_000,
            master_seed: 0,
            checkpoints: Vec::new(),
            histogram_bins: 20,
            keep_trajectories: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: u32,
    pub profile: String,
    /// Who hired the strong candidate.
    pub winner: Player,
    pub x1_after: Reputation,
    pub x2_after: Reputation,
    pub payoff1: f64,
    pub payoff2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub trial: u64,
    pub rounds: Vec<RoundRecord>,
    /// First round (1-based) with a non-compete profile.
    pub stop_round: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub round: u32,
    /// Equal-width bins of `x1/(x1+x2)` over `[0, 1]`.
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StopStats {
    pub n_trials: u64,
    pub k: u32,
    pub master_seed: u64,
    /// Entry `r − 1` is the fraction of trials whose stop round is `r`.
    pub stop_probability: Vec<f64>,
    pub stop_fraction: f64,
    /// Trials that compete through all `k` rounds (censored).
    pub never_stop_fraction: f64,
    /// Mean stop round, counting censored trials as `k + 1`.
    pub mean_stop_round: f64,
    pub mean_rounds_competed: f64,
    pub mean_welfare: f64,
    pub welfare_std_error: f64,
    /// Three standard errors.
    pub welfare_half_width: f64,
    /// Root welfare of the solved table.
    pub exact_welfare: f64,
    pub histograms: Vec<Histogram>,
}

impl StopStats {
    /// Whether the exact welfare lies within `sigmas` standard errors of the
    /// empirical mean.
    pub fn calibrated(&self, sigmas: f64) -> bool {
        (self.mean_welfare - self.exact_welfare).abs() <= sigmas * self.welfare_std_error + 1e-12
    }
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub stats: StopStats,
    pub trajectories: Option<Vec<Trajectory>>,
}

struct Context<'a, S> {
    table: &'a EquilibriumTable<S>,
    rule: ResolvedRule<f64>,
    q: f64,
    checkpoints: Vec<u32>,
    bins: usize,
    seed: u64,
}

/// Per-trial summary. Welfare is `k + q·(non-compete rounds)`, so integer
/// counts carry everything and the reduction is exact.
struct Outcome {
    stop_round: Option<u32>,
    non_compete: u64,
    bins: Vec<usize>,
}

#[derive(Clone)]
struct Totals {
    n: u64,
    stops: Vec<u64>,
    never: u64,
    stop_round_sum: u128,
    competed_sum: u128,
    nc_sum: u128,
    nc_sq_sum: u128,
    hist: Vec<Vec<u64>>,
}

impl Totals {
    fn new(k: u32, checkpoints: usize, bins: usize) -> Self {
        Totals {
            n: 0,
            stops: vec![0; k as usize],
            never: 0,
            stop_round_sum: 0,
            competed_sum: 0,
            nc_sum: 0,
            nc_sq_sum: 0,
            hist: vec![vec![0; bins]; checkpoints],
        }
    }

    fn add(mut self, o: &Outcome, k: u32) -> Self {
        self.n += 1;
        match o.stop_round {
            Some(r) => {
                self.stops[r as usize - 1] += 1;
                self.stop_round_sum += r as u128;
                self.competed_sum += r as u128 - 1;
            }
            None => {
                self.never += 1;
                self.stop_round_sum += k as u128 + 1;
                self.competed_sum += k as u128;
            }
        }
        self.nc_sum += o.non_compete as u128;
        self.nc_sq_sum += (o.non_compete as u128).pow(2);
        for (h, &b) in self.hist.iter_mut().zip(&o.bins) {
            h[b] += 1;
        }
        self
    }

    fn merge(mut self, other: Totals) -> Self {
        self.n += other.n;
        for (a, b) in self.stops.iter_mut().zip(other.stops) {
            *a += b;
        }
        self.never += other.never;
        self.stop_round_sum += other.stop_round_sum;
        self.competed_sum += other.competed_sum;
        self.nc_sum += other.nc_sum;
        self.nc_sq_sum += other.nc_sq_sum;
        for (ha, hb) in self.hist.iter_mut().zip(other.hist) {
            for (a, b) in ha.iter_mut().zip(hb) {
                *a += b;
            }
        }
        self
    }
}

impl<S: Scalar> Context<'_, S> {
    fn run(&self, trial: u64, record: bool) -> (Outcome, Option<Trajectory>) {
        let k = self.table.k();
        let (mut x1, mut x2) = self.table.spec().start();
        let mut rng = trial_rng(self.seed, trial);
        let mut stop_round = None;
        let mut non_compete = 0;
        let mut bins = Vec::with_capacity(self.checkpoints.len());
        let mut rounds = Vec::new();
        for round in 1..=k {
            let profile = self.table.profile(k - round + 1, x1).expect("full table covers every reachable state");
            let (winner, pay) = match profile {
                ActionProfile::Compete => {
                    let c = self.rule.p1_wins(x1, x2);
                    if rng.gen::<f64>() < c {
                        (Player::One, (1.0, 0.0))
                    } else {
                        (Player::Two, (0.0, 1.0))
                    }
                }
                ActionProfile::Player1Strong => (Player::One, (1.0, self.q)),
                ActionProfile::Player2Strong => (Player::Two, (self.q, 1.0)),
            };
            if !profile.is_compete() {
                non_compete += 1;
                stop_round.get_or_insert(round);
            }
            match winner {
                Player::One => x1 += 1,
                Player::Two => x2 += 1,
            }
            if self.checkpoints.contains(&round) {
                let frac = x1 as f64 / (x1 + x2) as f64;
                bins.push(((frac * self.bins as f64) as usize).min(self.bins - 1));
            }
            if record {
                rounds.push(RoundRecord {
                    round,
                    profile: profile.code().to_string(),
                    winner,
                    x1_after: x1,
                    x2_after: x2,
                    payoff1: pay.0,
                    payoff2: pay.1,
                });
            }
        }
        let trajectory = record.then_some(Trajectory { seed: self.seed, trial, rounds, stop_round });
        (Outcome { stop_round, non_compete, bins }, trajectory)
    }
}

/// Replay the equilibrium `trials` times, sampling contest outcomes.
///
/// Trial `i` draws from its own stream derived from `(master_seed, i)`, and
/// all aggregates are integer counts, so results do not depend on thread
/// scheduling.
pub fn simulate<S: Scalar>(table: &EquilibriumTable<S>, opts: &SimulateOptions) -> Result<Simulation> {
    table.require_full()?;
    let k = table.k();
    if opts.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if opts.histogram_bins == 0 {
        return Err(Error::InvalidParameter("histogram_bins must be at least 1".into()));
    }
    let mut checkpoints = if opts.checkpoints.is_empty() {
        vec![(k / 4).max(1), (k / 2).max(1), k]
    } else {
        opts.checkpoints.clone()
    };
    checkpoints.sort_unstable();
    checkpoints.dedup();
    if let Some(&c) = checkpoints.iter().find(|&&c| c == 0 || c > k) {
        return Err(Error::InvalidParameter(format!("checkpoint {c} is outside 1..={k}")));
    }
    let spec = table.spec();
    let ctx = Context {
        table,
        rule: spec.rule().resolve::<f64>()?,
        q: spec.q().to_f64(),
        checkpoints,
        bins: opts.histogram_bins,
        seed: opts.master_seed,
    };
    let empty = || Totals::new(k, ctx.checkpoints.len(), ctx.bins);

    let (totals, trajectories) = if opts.keep_trajectories {
        let runs: Vec<_> = (0..opts.trials).into_par_iter().map(|i| ctx.run(i, true)).collect();
        let mut totals = empty();
        let mut trajectories = Vec::with_capacity(runs.len());
        for (o, t) in runs {
            totals = totals.add(&o, k);
            trajectories.extend(t);
        }
        (totals, Some(trajectories))
    } else {
        let totals = (0..opts.trials)
            .into_par_iter()
            .fold(empty, |acc, i| acc.add(&ctx.run(i, false).0, k))
            .reduce(empty, Totals::merge);
        (totals, None)
    };

    let n = totals.n as f64;
    let mean_nc = totals.nc_sum as f64 / n;
    let var_nc = if totals.n > 1 {
        // Σ(x − x̄)² from integer moments, computed without cancellation.
        let centered = totals.nc_sq_sum as f64 - (totals.nc_sum as f64) * mean_nc;
        centered.max(0.0) / (n - 1.0)
    } else {
        0.0
    };
    let se = ctx.q * (var_nc / n).sqrt();
    let stats = StopStats {
        n_trials: totals.n,
        k,
        master_seed: opts.master_seed,
        stop_probability: totals.stops.iter().map(|&c| c as f64 / n).collect(),
        stop_fraction: (totals.n - totals.never) as f64 / n,
        never_stop_fraction: totals.never as f64 / n,
        mean_stop_round: totals.stop_round_sum as f64 / n,
        mean_rounds_competed: totals.competed_sum as f64 / n,
        mean_welfare: k as f64 + ctx.q * mean_nc,
        welfare_std_error: se,
        welfare_half_width: 3.0 * se,
        exact_welfare: table.root_welfare().to_f64(),
        histograms: ctx
            .checkpoints
            .iter()
            .zip(totals.hist)
            .map(|(&round, counts)| Histogram { round, counts })
            .collect(),
    };
    Ok(Simulation { stats, trajectories })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{solve, solve_full};
    use crate::game::{CompetitionRule, GameSpec, Quality};
    use crate::numeric::{Exact, Number};

    fn g2() -> EquilibriumTable<Exact> {
        solve_full::<Exact>(&GameSpec::tullock(2, Quality::ratio(3, 5).unwrap())).unwrap()
    }

    #[test]
    fn single_trial_is_reproducible() {
        let opts = SimulateOptions { trials: 1, master_seed: 7, keep_trajectories: true, ..Default::default() };
        let a = simulate(&g2(), &opts).unwrap();
        let b = simulate(&g2(), &opts).unwrap();
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.trajectories, b.trajectories);
        let t = &a.trajectories.unwrap()[0];
        assert_eq!(t.rounds.len(), 2);
        assert_eq!(t.rounds[0].profile, "++");
        assert_eq!(t.stop_round, Some(2));
    }

    #[test]
    fn welfare_is_calibrated() {
        let opts = SimulateOptions { trials: 20_000, master_seed: 3, ..Default::default() };
        let s = simulate(&g2(), &opts).unwrap().stats;
        assert_eq!(s.exact_welfare, 2.6);
        assert!(s.calibrated(4.0), "{s:?}");
        assert_eq!(s.stop_probability[1], 1.0);
        assert_eq!(s.never_stop_fraction, 0.0);
    }

    #[test]
    fn trajectories_respect_invariants() {
        let spec = GameSpec::new(40, Quality::decimal(0.3).unwrap(), 1, 1, CompetitionRule::fixed_p(Number::decimal(0.2)).unwrap())
            .unwrap();
        let table = solve_full::<f64>(&spec).unwrap();
        let opts = SimulateOptions { trials: 200, master_seed: 11, keep_trajectories: true, ..Default::default() };
        let sim = simulate(&table, &opts).unwrap();
        for t in sim.trajectories.unwrap() {
            let (mut s, mut last) = (2, None);
            for r in &t.rounds {
                assert_eq!(r.x1_after + r.x2_after, s + 1);
                s += 1;
                assert!((r.payoff1 + r.payoff2 - 1.0).abs() < 1e-15 || (r.payoff1 + r.payoff2 - 1.3).abs() < 1e-12);
                if let Some(stop) = t.stop_round {
                    if r.round >= stop {
                        assert_ne!(r.profile, "++");
                        if let Some(p) = &last {
                            assert_eq!(p, &r.profile);
                        }
                        last = Some(r.profile.clone());
                    }
                }
            }
        }
    }

    #[test]
    fn order_of_execution_does_not_matter() {
        let table = solve_full::<f64>(&GameSpec::tullock(30, Quality::decimal(0.25).unwrap())).unwrap();
        let opts = SimulateOptions { trials: 3000, master_seed: 5, ..Default::default() };
        let parallel = simulate(&table, &opts).unwrap().stats;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| simulate(&table, &opts).unwrap().stats);
        assert_eq!(parallel, serial);
        let kept = simulate(&table, &SimulateOptions { keep_trajectories: true, ..opts }).unwrap().stats;
        assert_eq!(parallel, kept);
    }

    #[test]
    fn refusals() {
        let root_only = solve::<f64>(&GameSpec::tullock(3, Quality::decimal(0.3).unwrap())).unwrap();
        assert!(matches!(simulate(&root_only, &SimulateOptions::default()), Err(Error::RequiresFullTable)));
        let zero = SimulateOptions { trials: 0, ..Default::default() };
        assert!(simulate(&g2(), &zero).is_err());
    }
}
