//! t-binding games: both players are forced to compete for the first `t`
//! rounds and play the canonical equilibrium afterwards.

use crate::equilibrium::EquilibriumTable;
use crate::error::{Error, Result};
use crate::game::{CompetitionRule, Reputation};
use crate::numeric::Scalar;

/// Law of player 1's win count after `t` forced contests from `(x1, x2)`:
/// entry `i` is the probability that player 1 won exactly `i` of them.
///
/// Under Tullock this is the Polya urn split (beta-binomial); from `(1, 1)`
/// it is uniform on `0..=t`.
pub fn split_distribution<S: Scalar>(
    rule: &CompetitionRule,
    x1: Reputation,
    x2: Reputation,
    t: u32,
) -> Result<Vec<S>> {
    if x1 == 0 || x2 == 0 {
        return Err(Error::InvalidState { x1, x2 });
    }
    let mut dist = vec![S::one()];
    for m in 0..t as u64 {
        let mut next = vec![S::zero(); dist.len() + 1];
        for (i, w) in dist.iter().enumerate() {
            let a = x1 + i as u64;
            let b = x2 + m - i as u64;
            let c: S = rule.win_prob(a, b)?;
            next[i + 1] = next[i + 1].clone() + w.clone() * c.clone();
            next[i] = next[i].clone() + w.clone() * (S::one() - c);
        }
        dist = next;
    }
    Ok(dist)
}

/// Expected welfare of the `t`-binding version of the table's game.
///
/// Each binding round hires exactly one strong candidate and nobody takes
/// the weak one, so it contributes 1; the rest is the equilibrium welfare of
/// the remaining `k − t` rounds averaged over the split law.
pub fn t_binding_welfare<S: Scalar>(table: &EquilibriumTable<S>, t: u32) -> Result<S> {
    let spec = table.spec();
    let k = spec.k();
    if t >= k {
        return Err(Error::InvalidParameter(format!("t = {t} must be below k = {k}")));
    }
    table.require_full()?;
    let (x1, x2) = spec.start();
    let weights: Vec<S> = if *spec.rule() == CompetitionRule::Tullock && (x1, x2) == (1, 1) {
        vec![S::ratio(1, t as u64 + 1); t as usize + 1]
    } else {
        split_distribution(spec.rule(), x1, x2, t)?
    };
    let remaining = k - t;
    let mut welfare = S::from_u64(t as u64);
    for (i, w) in weights.into_iter().enumerate() {
        let v = table.get(remaining, x1 + i as u64).expect("full table covers every split");
        welfare = welfare + w * v.welfare();
    }
    Ok(welfare)
}
