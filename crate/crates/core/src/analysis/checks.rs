//! Grid checks of the closed-form bounds against solved values.

use serde::Serialize;

use crate::equilibrium::{solve_full, ValueGrid};
use crate::error::{Error, Result};
use crate::game::{higher_player, ActionProfile, CompetitionRule, GameSpec, Player, Quality};
use crate::numeric::{Number, FLOAT_REL_TOL};

use super::binomial::binomial_cdf;
use super::bounds::{fixed_p_bound, fixed_p_stop_gap, r_hat, t_bound, LimitParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    /// Smallest `bound − value` seen.
    pub min_slack: f64,
    pub first_violation: Option<String>,
}

impl BoundCheck {
    fn new(name: String) -> Self {
        BoundCheck { name, checked: 0, violations: 0, min_slack: f64::INFINITY, first_violation: None }
    }

    /// Record `value ≤ bound` at the float tolerance.
    fn record(&mut self, value: f64, bound: f64, at: impl FnOnce() -> String) {
        self.checked += 1;
        let slack = bound - value;
        self.min_slack = self.min_slack.min(slack);
        if slack < -FLOAT_REL_TOL * bound.abs().max(1.0) {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(format!("{}: value {value} > bound {bound}", at()));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `u2(s_k(t−x, x)) ≤ max{b_q(k, t, x), kq}` for every `t_bound < t ≤ max_t`,
/// `1 ≤ x < t` and `1 ≤ k ≤ max_k`.
pub fn tullock_bound_check(q: f64, max_t: u64, max_k: u32) -> Result<BoundCheck> {
    let quality = Quality::decimal(q)?;
    let mut check = BoundCheck::new(format!("tullock-bound q={q}"));
    let t_lo = t_bound(q).floor() as u64 + 1;
    if t_lo > max_t || max_k == 0 {
        return Ok(check);
    }
    let t_lo = t_lo.max(2);
    let grid = ValueGrid::<f64>::solve(&quality, &CompetitionRule::Tullock, max_k, t_lo, max_t)?;
    let r = r_hat(q);
    // F_r̂(x, t) does not depend on k.
    let cdf: Vec<Vec<f64>> = (t_lo..=max_t).map(|t| (0..t).map(|x| binomial_cdf(r, x, t)).collect()).collect();
    for k in 1..=max_k {
        let kf = k as f64;
        let upside = (kf - 1.0) * (1.0 - q) + 1.0;
        for t in t_lo..=max_t {
            let row = &cdf[(t - t_lo) as usize];
            for x in 1..t {
                let u2 = grid.get(k, t - x, x).expect("grid covers the check range").u2;
                let b = x as f64 / t as f64 + (kf - 1.0) * q + 3.0 * row[x as usize] * upside;
                check.record(u2, b.max(kf * q), || format!("k={k} t={t} x={x}"));
            }
        }
    }
    Ok(check)
}

/// `u2(s_k(1+d, 1)) ≤ max{b^p_q(k, d), kq}` under the fixed-p rule for
/// `0 ≤ d ≤ max_d` and `1 ≤ k ≤ max_k`. Only the gap matters under this
/// rule, so one base reputation suffices.
pub fn fixed_p_bound_check(q: f64, p: f64, max_d: u64, max_k: u32) -> Result<BoundCheck> {
    fixed_p_bound(q, p, 1, 0)?;
    let quality = Quality::decimal(q)?;
    let rule = CompetitionRule::fixed_p(Number::decimal(p))?;
    let mut check = BoundCheck::new(format!("fixed-p-bound q={q} p={p}"));
    if max_k == 0 {
        return Ok(check);
    }
    let grid = ValueGrid::<f64>::solve(&quality, &rule, max_k, 2, 2 + max_d)?;
    for k in 1..=max_k {
        for d in 0..=max_d {
            let u2 = grid.get(k, 1 + d, 1).expect("grid covers the check range").u2;
            let b = fixed_p_bound(q, p, k as u64, d)?;
            check.record(u2, b.max(k as f64 * q), || format!("k={k} d={d}"));
        }
    }
    Ok(check)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapCheck {
    pub q: f64,
    pub p: f64,
    pub k: u32,
    pub d_star: u64,
    pub states_checked: u64,
    /// States with reputation gap above `d_star` whose profile is ⟨+,+⟩.
    pub competing_beyond: u64,
}

impl GapCheck {
    pub fn passed(&self) -> bool {
        self.competing_beyond == 0
    }
}

/// Under the fixed-p rule from `(1, 1)`, count competing states whose gap
/// exceeds `d*`.
pub fn fixed_p_gap_check(q: f64, p: f64, k: u32) -> Result<GapCheck> {
    let d_star = fixed_p_stop_gap(q, p, k as u64)?;
    let spec = GameSpec::new(k, Quality::decimal(q)?, 1, 1, CompetitionRule::fixed_p(Number::decimal(p))?)?;
    let table = solve_full::<f64>(&spec)?;
    let mut check = GapCheck { q, p, k, d_star, states_checked: 0, competing_beyond: 0 };
    for (key, v) in table.states() {
        if key.remaining == 0 || key.x1.abs_diff(key.x2) <= d_star {
            continue;
        }
        check.states_checked += 1;
        if v.profile == Some(ActionProfile::Compete) {
            check.competing_beyond += 1;
        }
    }
    Ok(check)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StopCheck {
    pub params: LimitParams,
    pub k: u32,
    pub t_star: u64,
    pub start: (u64, u64),
    pub root_profile: String,
    /// Lower player's root utility minus `kq`.
    pub lower_excess: f64,
    /// ⟨+,+⟩ states anywhere in the table, including off-path ones.
    pub compete_states: u64,
}

impl StopCheck {
    /// The lower player takes the weak candidate from the first round on and
    /// earns exactly `kq`.
    pub fn passed(&self) -> bool {
        self.root_profile != ActionProfile::Compete.code() && self.lower_excess.abs() <= 1e-9 * self.k as f64
    }
}

/// Solve `G_k(t* − ⌊p·t*⌋, ⌊p·t*⌋)` and confirm the lower player never
/// competes.
pub fn tullock_stop_check(q: f64, epsilon: f64, k: u32) -> Result<StopCheck> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let params = LimitParams::new(q, epsilon)?;
    let t_star = params.t_star(k as u64);
    let start = params.start(k as u64);
    let spec = GameSpec::new(k, Quality::decimal(q)?, start.0, start.1, CompetitionRule::Tullock)?;
    let table = solve_full::<f64>(&spec)?;
    let root = table.root();
    let lower = match higher_player(start.0, start.1) {
        Player::One => root.u2,
        Player::Two => root.u1,
    };
    Ok(StopCheck {
        params,
        k,
        t_star,
        start,
        root_profile: root.profile.map_or("", |p| p.code()).to_string(),
        lower_excess: lower - k as f64 * q,
        compete_states: table.compete_count() as u64,
    })
}
