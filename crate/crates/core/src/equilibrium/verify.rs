//! Equilibrium and structural checks over a fully retained table.

use serde::Serialize;

use crate::error::Result;
use crate::game::{higher_player, ActionProfile, Player, Reputation};
use crate::numeric::Scalar;

use super::grid::ValueGrid;
use super::solve::{solve_with, SolveOptions};
use super::table::EquilibriumTable;

const MAX_WITNESSES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeViolation {
    pub remaining: u32,
    pub x1: Reputation,
    pub x2: Reputation,
    pub profile: String,
    pub deviator: Player,
    /// Deviation payoff minus prescribed payoff, as f64.
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeReport {
    pub states_checked: u64,
    pub violation: Option<SpeViolation>,
}

impl SpeReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// One-shot deviation check: at every decision state, build the 2×2 stage
/// game from canonical continuation values and confirm the prescribed profile
/// is a stage Nash equilibrium.
///
/// The ⟨−,−⟩ cell (both bid weak, the weak candidate is contested and nobody
/// gains reputation) continues at an off-table state; its values come from a
/// [`ValueGrid`].
pub fn verify_spe<S: Scalar>(table: &EquilibriumTable<S>) -> Result<SpeReport> {
    table.require_full()?;
    let k = table.k();
    if k == 0 {
        return Ok(SpeReport { states_checked: 0, violation: None });
    }
    let spec = table.spec();
    let q: S = spec.q().value()?;
    let root_sum = spec.x1() + spec.x2();
    let off_path = ValueGrid::<S>::solve(spec.q(), spec.rule(), k - 1, root_sum, root_sum + k as u64 - 1)?;

    let mut checked = 0;
    for j in (1..=k).rev() {
        let played = (k - j) as u64;
        for x1 in spec.x1()..=spec.x1() + played {
            let x2 = table.x2_at(j, x1);
            let profile = table.profile(j, x1).expect("full table");
            let a = table.get(j - 1, x1 + 1).expect("full table");
            let b = table.get(j - 1, x1).expect("full table");
            let n = off_path.get(j - 1, x1, x2).expect("grid covers the reputation sums of the table");
            let c: S = spec.rule().win_prob(x1, x2)?;
            let one = S::one();
            let lose = one.clone() - c.clone();

            // payoff[bid1][bid2], index 0 = strong, 1 = weak.
            let payoff = [
                [
                    (
                        c.clone() * (one.clone() + a.u1.clone()) + lose.clone() * b.u1.clone(),
                        c.clone() * a.u2.clone() + lose.clone() * (one.clone() + b.u2.clone()),
                    ),
                    (one.clone() + a.u1.clone(), q.clone() + a.u2.clone()),
                ],
                [
                    (q.clone() + b.u1.clone(), one.clone() + b.u2.clone()),
                    (c.clone() * q.clone() + n.u1.clone(), lose * q.clone() + n.u2.clone()),
                ],
            ];
            let s1 = usize::from(!profile.bids_strong(Player::One));
            let s2 = usize::from(!profile.bids_strong(Player::Two));
            let (p1, p2) = &payoff[s1][s2];
            checked += 1;
            let dev1 = &payoff[1 - s1][s2].0;
            let dev2 = &payoff[s1][1 - s2].1;
            let found = if dev1.exceeds(p1) {
                Some((Player::One, dev1.to_f64() - p1.to_f64()))
            } else if dev2.exceeds(p2) {
                Some((Player::Two, dev2.to_f64() - p2.to_f64()))
            } else {
                None
            };
            if let Some((deviator, gain)) = found {
                return Ok(SpeReport {
                    states_checked: checked,
                    violation: Some(SpeViolation {
                        remaining: j,
                        x1,
                        x2,
                        profile: profile.code().to_string(),
                        deviator,
                        gain,
                    }),
                });
            }
        }
    }
    Ok(SpeReport { states_checked: checked, violation: None })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub remaining: u32,
    pub x1: Reputation,
    pub x2: Reputation,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: u64,
    pub violation_count: u64,
    /// First few violations.
    pub violations: Vec<Witness>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome { name, checked: 0, violation_count: 0, violations: Vec::new() }
    }

    fn record(&mut self, ok: bool, at: (u32, Reputation, Reputation), detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(Witness { remaining: at.0, x1: at.1, x2: at.2, detail: detail() });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralReport {
    pub checks: Vec<CheckOutcome>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Structural properties of the canonical equilibrium over every state of a
/// full table:
///
/// - `stop-forever`: a non-compete profile persists into the next round.
/// - `higher-ge-lower`: the higher player's utility is at least the lower's.
/// - `kq-implies-never`: `u_i = j·q` means player i bids weak throughout.
/// - `win-keeps-competing`: after winning a contest the winner bids strong.
/// - `monotonicity`: utilities are monotone in own and rival reputation,
///   compared against tables solved from starts shifted by one.
pub fn structural_checks<S: Scalar>(table: &EquilibriumTable<S>) -> Result<StructuralReport> {
    table.require_full()?;
    let spec = table.spec();
    let k = table.k();
    let q: S = spec.q().value()?;

    let mut stop = CheckOutcome::new("stop-forever");
    let mut order = CheckOutcome::new("higher-ge-lower");
    let mut kq = CheckOutcome::new("kq-implies-never");
    let mut keeps = CheckOutcome::new("win-keeps-competing");
    let mut mono = CheckOutcome::new("monotonicity");

    // weak_throughout[p][i] for the layer below the current one: whether
    // player p bids weak at every state of the play that starts there.
    let mut below: [Vec<bool>; 2] = [vec![true; k as usize + 1], vec![true; k as usize + 1]];
    for j in 1..=k {
        let played = (k - j) as u64;
        let mut here: [Vec<bool>; 2] = [Vec::new(), Vec::new()];
        for i in 0..=played {
            let x1 = spec.x1() + i;
            let x2 = table.x2_at(j, x1);
            let at = (j, x1, x2);
            let v = table.get(j, x1).expect("full table");
            let profile = v.profile.expect("decision state");

            if j >= 2 {
                let after_p1 = table.profile(j - 1, x1 + 1).expect("full table");
                let after_p2 = table.profile(j - 1, x1).expect("full table");
                match profile {
                    ActionProfile::Player1Strong => stop.record(after_p1 == profile, at, || {
                        format!("+- followed by {after_p1}")
                    }),
                    ActionProfile::Player2Strong => stop.record(after_p2 == profile, at, || {
                        format!("-+ followed by {after_p2}")
                    }),
                    ActionProfile::Compete => {
                        keeps.record(after_p1.bids_strong(Player::One), at, || {
                            format!("player 1 won, then plays {after_p1}")
                        });
                        keeps.record(after_p2.bids_strong(Player::Two), at, || {
                            format!("player 2 won, then plays {after_p2}")
                        });
                    }
                }
            }

            let (hi, lo) = match higher_player(x1, x2) {
                Player::One => (&v.u1, &v.u2),
                Player::Two => (&v.u2, &v.u1),
            };
            order.record(!lo.exceeds(hi), at, || format!("u_higher = {} < u_lower = {}", hi.encode(), lo.encode()));

            let jq = S::from_u64(j as u64) * q.clone();
            for player in [Player::One, Player::Two] {
                let p = player.index();
                // The other player takes the strong candidate when `player` bids weak.
                let next = match player {
                    Player::One => i as usize,
                    Player::Two => i as usize + 1,
                };
                let weak_all = !profile.bids_strong(player) && below[p][next];
                here[p].push(weak_all);
                let u = if p == 0 { &v.u1 } else { &v.u2 };
                if u.approx_eq(&jq) {
                    kq.record(weak_all, at, || format!("u{} = j·q but player {} bids strong later", p + 1, p + 1));
                }
            }
        }
        below = here;
    }

    if k > 0 {
        let opts = SolveOptions::full();
        let (r1, r2) = spec.start();
        let up1 = solve_with::<S>(&spec.with_start(r1 + 1, r2)?, &opts)?;
        let up2 = solve_with::<S>(&spec.with_start(r1, r2 + 1)?, &opts)?;
        for j in 0..=k {
            let played = (k - j) as u64;
            for i in 0..=played {
                let base = table.get(j, r1 + i).expect("full table");
                let x2 = table.x2_at(j, r1 + i);
                let at = (j, r1 + i, x2);
                let s1 = up1.get(j, r1 + 1 + i).expect("full table");
                let s2 = up2.get(j, r1 + i).expect("full table");
                mono.record(!base.u1.exceeds(&s1.u1) && !s1.u2.exceeds(&base.u2), at, || {
                    format!("raising x1: u1 {} -> {}, u2 {} -> {}", base.u1.encode(), s1.u1.encode(), base.u2.encode(), s1.u2.encode())
                });
                mono.record(!s2.u1.exceeds(&base.u1) && !base.u2.exceeds(&s2.u2), at, || {
                    format!("raising x2: u1 {} -> {}, u2 {} -> {}", base.u1.encode(), s2.u1.encode(), base.u2.encode(), s2.u2.encode())
                });
            }
        }
    }

    Ok(StructuralReport { checks: vec![stop, order, kq, keeps, mono] })
}
