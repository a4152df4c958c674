//! Domain types for the recruiting game and its competition rules.
//!
//! Two firms, `k` rounds, one strong candidate (quality 1) and one weak
//! candidate (quality `q < 1`) per round. A firm's reputation is its count of
//! strong hires plus its initial endowment. When both firms bid for the same
//! candidate a competition rule decides the winner from the reputations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Number, Scalar};

/// Count of strong candidates hired plus initial endowment.
pub type Reputation = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }
}

/// The higher player; equal reputations favor player 1.
pub fn higher_player(x1: Reputation, x2: Reputation) -> Player {
    if x1 >= x2 {
        Player::One
    } else {
        Player::Two
    }
}

/// First-round bids of (player 1, player 2) in the canonical equilibrium.
/// `⟨−,−⟩` never occurs there, so it has no variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum ActionProfile {
    /// ⟨+,+⟩: both bid for the strong candidate.
    Compete,
    /// ⟨+,−⟩: player 1 takes the strong candidate, player 2 the weak one.
    Player1Strong,
    /// ⟨−,+⟩: player 1 takes the weak candidate, player 2 the strong one.
    Player2Strong,
}

impl ActionProfile {
    pub fn code(self) -> &'static str {
        match self {
            ActionProfile::Compete => "++",
            ActionProfile::Player1Strong => "+-",
            ActionProfile::Player2Strong => "-+",
        }
    }

    pub fn is_compete(self) -> bool {
        self == ActionProfile::Compete
    }

    pub fn bids_strong(self, player: Player) -> bool {
        matches!(
            (self, player),
            (ActionProfile::Compete, _)
                | (ActionProfile::Player1Strong, Player::One)
                | (ActionProfile::Player2Strong, Player::Two)
        )
    }

    /// The profile in which `player` alone takes the strong candidate.
    pub fn yielding_to(player: Player) -> ActionProfile {
        match player {
            Player::One => ActionProfile::Player1Strong,
            Player::Two => ActionProfile::Player2Strong,
        }
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "++" => Ok(ActionProfile::Compete),
            "+-" => Ok(ActionProfile::Player1Strong),
            "-+" => Ok(ActionProfile::Player2Strong),
            other => Err(Error::Format(format!("unknown action profile {other:?}"))),
        }
    }
}

/// Quality of the weak candidate, strictly between 0 and 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Quality(Number);

impl Quality {
    pub fn new(q: Number) -> Result<Self> {
        let v = q.to_f64();
        let in_range = match &q {
            Number::Ratio(r) => {
                *r > num::BigRational::from_integer(0.into())
                    && *r < num::BigRational::from_integer(1.into())
            }
            Number::Decimal(_) => v > 0.0 && v < 1.0,
        };
        if !in_range {
            return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
        }
        Ok(Quality(q))
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        Self::new(Number::ratio(numer, denom))
    }

    pub fn decimal(q: f64) -> Result<Self> {
        Self::new(Number::Decimal(q))
    }

    pub fn number(&self) -> &Number {
        &self.0
    }

    pub fn value<S: Scalar>(&self) -> Result<S> {
        S::from_number(&self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Quality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quality::new(s.parse()?)
    }
}

impl Serialize for Quality {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quality {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Quality::new(Number::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A user-supplied competition function `c(x1, x2)`: probability that player 1
/// wins a contested candidate.
pub trait CompetitionFunction: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn win_prob(&self, x1: Reputation, x2: Reputation) -> Number;
}

#[derive(Clone, Debug)]
pub enum CompetitionRule {
    /// Win probability proportional to reputation.
    Tullock,
    /// The lower player wins with fixed probability `p < 1/2`; ties count
    /// player 1 as higher.
    FixedP(Number),
    Custom(Arc<dyn CompetitionFunction>),
}

impl PartialEq for CompetitionRule {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CompetitionRule::Tullock, CompetitionRule::Tullock) => true,
            (CompetitionRule::FixedP(a), CompetitionRule::FixedP(b)) => a == b,
            (CompetitionRule::Custom(a), CompetitionRule::Custom(b)) => a.name() == b.name(),
            _ => false,
        }
    }
}

impl CompetitionRule {
    pub fn fixed_p(p: Number) -> Result<Self> {
        let v = p.to_f64();
        let ok = match &p {
            Number::Ratio(r) => {
                *r > num::BigRational::from_integer(0.into())
                    && *r < num::BigRational::new(1.into(), 2.into())
            }
            Number::Decimal(_) => v > 0.0 && v < 0.5,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1/2)")));
        }
        Ok(CompetitionRule::FixedP(p))
    }

    /// Stable identifier used in file headers and cache keys.
    pub fn id(&self) -> String {
        match self {
            CompetitionRule::Tullock => "tullock".to_string(),
            CompetitionRule::FixedP(_) => "fixed_p".to_string(),
            CompetitionRule::Custom(f) => format!("custom:{}", f.name()),
        }
    }

    pub fn param(&self) -> Option<&Number> {
        match self {
            CompetitionRule::FixedP(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, CompetitionRule::Custom(_))
    }

    /// Player 1's win probability at `(x1, x2)`.
    pub fn win_prob<S: Scalar>(&self, x1: Reputation, x2: Reputation) -> Result<S> {
        match self {
            CompetitionRule::Tullock => tullock_prob(x1, x2),
            CompetitionRule::FixedP(p) => fixed_p_prob(&S::from_number(p)?, x1, x2),
            CompetitionRule::Custom(f) => S::from_number(&f.win_prob(x1, x2)),
        }
    }

    pub(crate) fn resolve<S: Scalar>(&self) -> Result<ResolvedRule<S>> {
        Ok(match self {
            CompetitionRule::Tullock => ResolvedRule::Tullock,
            CompetitionRule::FixedP(p) => {
                let p = S::from_number(p)?;
                ResolvedRule::FixedP { high: S::one() - p.clone(), low: p }
            }
            CompetitionRule::Custom(f) => ResolvedRule::Custom(f.clone()),
        })
    }
}

impl fmt::Display for CompetitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompetitionRule::FixedP(p) => write!(f, "fixed_p(p={p})"),
            other => f.write_str(&other.id()),
        }
    }
}

/// A rule with its parameters converted once into the working scalar.
pub(crate) enum ResolvedRule<S> {
    Tullock,
    FixedP { high: S, low: S },
    Custom(Arc<dyn CompetitionFunction>),
}

impl<S: Scalar> ResolvedRule<S> {
    #[inline]
    pub(crate) fn p1_wins(&self, x1: Reputation, x2: Reputation) -> S {
        match self {
            ResolvedRule::Tullock => S::ratio(x1, x1 + x2),
            ResolvedRule::FixedP { high, low } => {
                if x1 >= x2 {
                    high.clone()
                } else {
                    low.clone()
                }
            }
            ResolvedRule::Custom(f) => S::from_number(&f.win_prob(x1, x2))
                .expect("custom rule values are checked when the solve starts"),
        }
    }
}

/// Tullock contest: `x1 / (x1 + x2)`.
pub fn tullock_prob<S: Scalar>(x1: Reputation, x2: Reputation) -> Result<S> {
    if x1 + x2 == 0 {
        return Err(Error::InvalidState { x1, x2 });
    }
    Ok(S::ratio(x1, x1 + x2))
}

/// Fixed-probability rule: `1 − p` when `x1 ≥ x2`, else `p`.
pub fn fixed_p_prob<S: Scalar>(p: &S, x1: Reputation, x2: Reputation) -> Result<S> {
    let half = S::ratio(1, 2);
    if !(*p > S::zero() && *p < half) {
        return Err(Error::InvalidParameter(format!(
            "p = {} must lie in (0, 1/2)",
            p.encode()
        )));
    }
    Ok(if x1 >= x2 { S::one() - p.clone() } else { p.clone() })
}

/// Full description of one game instance `G_{k,q}(x1, x2)`.
///
/// The numeric mode is not stored here: it is the scalar type a caller solves
/// with (`f64` or [`Exact`](crate::numeric::Exact)).
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    k: u32,
    q: Quality,
    x1: Reputation,
    x2: Reputation,
    rule: CompetitionRule,
}

impl GameSpec {
    /// `k = 0` is accepted as the empty game.
    pub fn new(k: u32, q: Quality, x1: Reputation, x2: Reputation, rule: CompetitionRule) -> Result<Self> {
        if x1 < 1 || x2 < 1 {
            return Err(Error::InvalidParameter(format!(
                "initial reputations must be at least 1, got ({x1}, {x2})"
            )));
        }
        Ok(GameSpec { k, q, x1, x2, rule })
    }

    /// Tullock game from the symmetric start `(1, 1)`.
    pub fn tullock(k: u32, q: Quality) -> Self {
        GameSpec { k, q, x1: 1, x2: 1, rule: CompetitionRule::Tullock }
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> &Quality {
        &self.q
    }
    pub fn x1(&self) -> Reputation {
        self.x1
    }
    pub fn x2(&self) -> Reputation {
        self.x2
    }
    pub fn start(&self) -> (Reputation, Reputation) {
        (self.x1, self.x2)
    }
    pub fn rule(&self) -> &CompetitionRule {
        &self.rule
    }

    pub fn with_k(&self, k: u32) -> Self {
        GameSpec { k, ..self.clone() }
    }

    pub fn with_start(&self, x1: Reputation, x2: Reputation) -> Result<Self> {
        GameSpec::new(self.k, self.q.clone(), x1, x2, self.rule.clone())
    }

    /// Number of states reachable from the root over all layers.
    pub fn state_count(&self) -> u128 {
        let k = self.k as u128;
        (k + 1) * (k + 2) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// `c(x1, x2)` lies strictly between 0 and 1.
    Range,
    /// `c(x1, x2+1) ≤ c(x1, x2) ≤ c(x1+1, x2)`.
    Monotone,
    /// `c(x1, x2) = 1 − c(x2, x1)` for `x1 ≠ x2`.
    Complement,
    /// `c(x, x) ≥ 1/2`.
    TieAdvantage,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub x1: Reputation,
    pub x2: Reputation,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} axiom fails at ({}, {}): {}", self.axiom, self.x1, self.x2, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pairs_checked: u64,
    pub violation: Option<AxiomViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check the competition-function axioms with ε = 1 on `[1, grid_max]²`.
pub fn validate_competition_rule<S: Scalar>(rule: &CompetitionRule, grid_max: Reputation) -> Result<ValidationReport> {
    if grid_max < 2 {
        return Err(Error::InvalidParameter(format!("grid_max = {grid_max} must be at least 2")));
    }
    validate_on_box::<S>(rule, 1, grid_max)
}

/// Axiom check on `[lo, hi]²`, used eagerly before solving with custom rules.
pub(crate) fn validate_on_box<S: Scalar>(rule: &CompetitionRule, lo: Reputation, hi: Reputation) -> Result<ValidationReport> {
    let c = |a, b| rule.win_prob::<S>(a, b);
    let half = S::ratio(1, 2);
    let mut checked = 0u64;
    let fail = |axiom, x1, x2, detail: String, checked| {
        Ok(ValidationReport { pairs_checked: checked, violation: Some(AxiomViolation { axiom, x1, x2, detail }) })
    };
    for x1 in lo..=hi {
        for x2 in lo..=hi {
            checked += 1;
            let v = c(x1, x2)?;
            if !(v > S::zero() && v < S::one()) {
                return fail(Axiom::Range, x1, x2, format!("c = {}", v.encode()), checked);
            }
            if x2 < hi {
                let w = c(x1, x2 + 1)?;
                if w.exceeds(&v) {
                    return fail(
                        Axiom::Monotone,
                        x1,
                        x2,
                        format!("c(x1, x2+1) = {} > c(x1, x2) = {}", w.encode(), v.encode()),
                        checked,
                    );
                }
            }
            if x1 < hi {
                let w = c(x1 + 1, x2)?;
                if v.exceeds(&w) {
                    return fail(
                        Axiom::Monotone,
                        x1,
                        x2,
                        format!("c(x1, x2) = {} > c(x1+1, x2) = {}", v.encode(), w.encode()),
                        checked,
                    );
                }
            }
            if x1 != x2 {
                let mirrored = S::one() - c(x2, x1)?;
                if !v.approx_eq(&mirrored) {
                    return fail(
                        Axiom::Complement,
                        x1,
                        x2,
                        format!("c = {} but 1 − c(x2, x1) = {}", v.encode(), mirrored.encode()),
                        checked,
                    );
                }
            } else if half.exceeds(&v) {
                return fail(Axiom::TieAdvantage, x1, x2, format!("c(x, x) = {} < 1/2", v.encode()), checked);
            }
        }
    }
    Ok(ValidationReport { pairs_checked: checked, violation: None })
}
