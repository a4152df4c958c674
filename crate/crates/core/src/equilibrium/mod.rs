//! Canonical equilibrium `s_k(x1, x2)` by backward induction.
//!
//! In every round the higher player (player 1 on equal reputations) bids for
//! the strong candidate and the lower player best-responds, taking the weak
//! candidate when indifferent. Values are materialized layer by layer over
//! the remaining round count.

mod grid;
mod oracle;
mod solve;
mod table;
mod verify;

pub use grid::ValueGrid;
pub use oracle::{brute_force_oracle, ORACLE_MAX_ROUNDS};
pub use solve::{solve, solve_full, solve_with, Retention, SolveOptions, DEFAULT_MEMORY_BUDGET};
pub use table::{EquilibriumTable, StateKey, StateValue};
pub(crate) use table::Layer;
pub use verify::{
    structural_checks, verify_spe, CheckOutcome, SpeReport, SpeViolation, StructuralReport, Witness,
};

use crate::game::{higher_player, ActionProfile, Player, Reputation};
use crate::numeric::Scalar;

/// Canonical values `(u1, u2)` of the state reached after one player hires the
/// strong candidate.
pub type Continuation<'a, S> = (&'a S, &'a S);

/// Decide the first-round profile at `(x1, x2)` given the continuation values
/// after player 1 wins the strong candidate (`after_p1`) and after player 2
/// does (`after_p2`). `c` is player 1's contest win probability.
pub fn decide_profile<S: Scalar>(
    q: &S,
    c: &S,
    x1: Reputation,
    x2: Reputation,
    after_p1: Continuation<'_, S>,
    after_p2: Continuation<'_, S>,
) -> ActionProfile {
    let one = S::one();
    match higher_player(x1, x2) {
        Player::One => {
            let compete = (one.clone() - c.clone()) * (one + after_p2.1.clone()) + c.clone() * after_p1.1.clone();
            let take_weak = q.clone() + after_p1.1.clone();
            if compete.exceeds(&take_weak) {
                ActionProfile::Compete
            } else {
                ActionProfile::Player1Strong
            }
        }
        Player::Two => {
            let compete = c.clone() * (one.clone() + after_p1.0.clone()) + (one - c.clone()) * after_p2.0.clone();
            let take_weak = q.clone() + after_p2.0.clone();
            if compete.exceeds(&take_weak) {
                ActionProfile::Compete
            } else {
                ActionProfile::Player2Strong
            }
        }
    }
}

/// Values of a state under `profile`, from the recursion for that profile.
pub(crate) fn profile_values<S: Scalar>(
    profile: ActionProfile,
    q: &S,
    c: &S,
    after_p1: Continuation<'_, S>,
    after_p2: Continuation<'_, S>,
) -> (S, S) {
    let one = S::one();
    match profile {
        ActionProfile::Compete => {
            let lose = one.clone() - c.clone();
            (
                c.clone() * (one.clone() + after_p1.0.clone()) + lose.clone() * after_p2.0.clone(),
                c.clone() * after_p1.1.clone() + lose * (one + after_p2.1.clone()),
            )
        }
        ActionProfile::Player1Strong => (one + after_p1.0.clone(), q.clone() + after_p1.1.clone()),
        ActionProfile::Player2Strong => (q.clone() + after_p2.0.clone(), one + after_p2.1.clone()),
    }
}

/// Decide and value one state. With `short_circuit`, a non-compete state takes
/// the closed form `u_higher = j`, `u_lower = j·q`.
#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn evaluate_state<S: Scalar>(
    remaining: u32,
    q: &S,
    c: &S,
    x1: Reputation,
    x2: Reputation,
    after_p1: Continuation<'_, S>,
    after_p2: Continuation<'_, S>,
    short_circuit: bool,
) -> (ActionProfile, S, S) {
    let profile = decide_profile(q, c, x1, x2, after_p1, after_p2);
    if short_circuit && !profile.is_compete() {
        let j = S::from_u64(remaining as u64);
        let lower = j.clone() * q.clone();
        return match profile {
            ActionProfile::Player1Strong => (profile, j, lower),
            _ => (profile, lower, j),
        };
    }
    let (u1, u2) = profile_values(profile, q, c, after_p1, after_p2);
    (profile, u1, u2)
}
