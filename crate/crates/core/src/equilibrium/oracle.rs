//! Exhaustive game-tree evaluation in exact arithmetic.
//!
//! Deliberately written without the layered solver's kernel or storage: every
//! node re-expands both of its subtrees, nothing is memoized.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{CompetitionRule, GameSpec, Reputation};
use crate::numeric::Exact;

pub const ORACLE_MAX_ROUNDS: u32 = 12;

/// Root utilities `(u1, u2)` of the canonical equilibrium by full-tree
/// enumeration. Refuses `k > 12`.
pub fn brute_force_oracle(spec: &GameSpec) -> Result<(Exact, Exact)> {
    if spec.k() > ORACLE_MAX_ROUNDS {
        return Err(Error::TooLarge { what: "the brute-force oracle", k: spec.k(), max: ORACLE_MAX_ROUNDS });
    }
    let q = match spec.q().number().as_ratio() {
        Some(q) => q.clone(),
        None => return Err(Error::NotExact("the oracle needs q as a ratio".into())),
    };
    // Reject decimal rule parameters up front.
    spec.rule().win_prob::<Exact>(spec.x1(), spec.x2())?;
    let mut node = Node { rule: spec.rule(), q };
    node.expand(spec.k(), spec.x1(), spec.x2())
}

struct Node<'a> {
    rule: &'a CompetitionRule,
    q: Exact,
}

impl Node<'_> {
    fn expand(&mut self, rounds_left: u32, x1: Reputation, x2: Reputation) -> Result<(Exact, Exact)> {
        if rounds_left == 0 {
            return Ok((Exact::zero(), Exact::zero()));
        }
        let p1_win = self.rule.win_prob::<Exact>(x1, x2)?;
        let p2_win = Exact::one() - p1_win.clone();

        // Subgame after player 1 takes the strong candidate, and after player 2 does.
        let (a1, a2) = self.expand(rounds_left - 1, x1 + 1, x2)?;
        let (b1, b2) = self.expand(rounds_left - 1, x1, x2 + 1)?;

        let contested = (
            &p1_win * (Exact::one() + &a1) + &p2_win * &b1,
            &p1_win * &a2 + &p2_win * (Exact::one() + &b2),
        );
        if x1 >= x2 {
            // Player 2 chooses; a tie goes to the weak candidate.
            let weak = (Exact::one() + &a1, &self.q + &a2);
            Ok(if contested.1 > weak.1 { contested } else { weak })
        } else {
            let weak = (&self.q + &b1, Exact::one() + &b2);
            Ok(if contested.0 > weak.0 { contested } else { weak })
        }
    }
}
