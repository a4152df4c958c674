use crate::error::{Error, Result};
use crate::game::{CompetitionRule, Quality, Reputation, ResolvedRule};
use crate::numeric::Scalar;

use super::evaluate_state;
use super::table::StateValue;

/// Canonical values `V_j(x1, x2)` for every `j ≤ max_remaining` and every
/// reputation pair (both at least 1) whose sum lies in a range.
///
/// A rooted table only holds states on one diagonal per layer; bound checks
/// and off-path continuations need values at arbitrary sums. Layer `j` covers
/// sums `[sum_lo, sum_hi + (max_remaining − j)]`, which is what the layers
/// above it consume.
#[derive(Clone, Debug)]
pub struct ValueGrid<S> {
    max_remaining: u32,
    sum_lo: u64,
    sum_hi: u64,
    layers: Vec<GridLayer<S>>,
}

#[derive(Clone, Debug)]
struct GridLayer<S> {
    profiles: Vec<crate::game::ActionProfile>,
    u1: Vec<S>,
    u2: Vec<S>,
}

fn tri(n: u64) -> u64 {
    n * (n + 1) / 2
}

impl<S: Scalar> ValueGrid<S> {
    pub fn solve(
        q: &Quality,
        rule: &CompetitionRule,
        max_remaining: u32,
        sum_lo: u64,
        sum_hi: u64,
    ) -> Result<Self> {
        if sum_lo < 2 || sum_hi < sum_lo {
            return Err(Error::InvalidParameter(format!(
                "sum range [{sum_lo}, {sum_hi}] must satisfy 2 ≤ lo ≤ hi"
            )));
        }
        let qv: S = q.value()?;
        let rule: ResolvedRule<S> = rule.resolve()?;
        let mut grid = ValueGrid { max_remaining, sum_lo, sum_hi, layers: Vec::new() };

        let top = |j: u32| sum_hi + (max_remaining - j) as u64;
        let size = |j: u32| (tri(top(j) - 1) - tri(sum_lo - 2)) as usize;

        let n0 = size(0);
        grid.layers.push(GridLayer { profiles: Vec::new(), u1: vec![S::zero(); n0], u2: vec![S::zero(); n0] });
        for j in 1..=max_remaining {
            let n = size(j);
            let mut layer = GridLayer {
                profiles: Vec::with_capacity(n),
                u1: Vec::with_capacity(n),
                u2: Vec::with_capacity(n),
            };
            let prev = &grid.layers[(j - 1) as usize];
            for s in sum_lo..=top(j) {
                for x1 in 1..s {
                    let x2 = s - x1;
                    let a1 = grid.index(s + 1, x1 + 1);
                    let a2 = grid.index(s + 1, x1);
                    let c = rule.p1_wins(x1, x2);
                    let (p, u1, u2) = evaluate_state(
                        j,
                        &qv,
                        &c,
                        x1,
                        x2,
                        (&prev.u1[a1], &prev.u2[a1]),
                        (&prev.u1[a2], &prev.u2[a2]),
                        false,
                    );
                    layer.profiles.push(p);
                    layer.u1.push(u1);
                    layer.u2.push(u2);
                }
            }
            debug_assert_eq!(layer.u1.len(), n);
            grid.layers.push(layer);
        }
        Ok(grid)
    }

    fn index(&self, sum: u64, x1: Reputation) -> usize {
        (tri(sum - 2) - tri(self.sum_lo - 2) + (x1 - 1)) as usize
    }

    pub fn max_remaining(&self) -> u32 {
        self.max_remaining
    }

    /// Largest reputation sum covered at `remaining`.
    pub fn sum_top(&self, remaining: u32) -> u64 {
        self.sum_hi + (self.max_remaining - remaining) as u64
    }

    pub fn get(&self, remaining: u32, x1: Reputation, x2: Reputation) -> Option<StateValue<S>> {
        if remaining > self.max_remaining || x1 < 1 || x2 < 1 {
            return None;
        }
        let s = x1 + x2;
        if s < self.sum_lo || s > self.sum_top(remaining) {
            return None;
        }
        let layer = &self.layers[remaining as usize];
        let i = self.index(s, x1);
        Some(StateValue { profile: layer.profiles.get(i).copied(), u1: layer.u1[i].clone(), u2: layer.u2[i].clone() })
    }
}
