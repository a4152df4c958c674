use crate::equilibrium::{solve, EquilibriumTable};
use crate::error::{Error, Result};
use crate::game::{GameSpec, Quality, Reputation};
use crate::numeric::{Exact, Number, Scalar};

/// Equilibrium welfare at the root against the optimum `k(1+q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerformanceReport<S> {
    pub k: u32,
    pub q: Quality,
    pub x1: Reputation,
    pub x2: Reputation,
    pub rule: String,
    pub p: Option<Number>,
    pub welfare: S,
    pub optimum: S,
    pub ratio: S,
    /// `2q/(1+q)`, the lower bound every game satisfies.
    pub lower_bound_2q: S,
}

pub fn performance_ratio<S: Scalar>(table: &EquilibriumTable<S>) -> Result<PerformanceReport<S>> {
    let spec = table.spec();
    if spec.k() == 0 {
        return Err(Error::InvalidParameter("the performance ratio is undefined for k = 0".into()));
    }
    let q: S = spec.q().value()?;
    let one_plus_q = S::one() + q.clone();
    let welfare = table.root_welfare();
    let optimum = S::from_u64(spec.k() as u64) * one_plus_q.clone();
    let ratio = welfare.clone() / optimum.clone();
    Ok(PerformanceReport {
        k: spec.k(),
        q: spec.q().clone(),
        x1: spec.x1(),
        x2: spec.x2(),
        rule: spec.rule().id(),
        p: spec.rule().param().cloned(),
        welfare,
        optimum,
        lower_bound_2q: S::from_u64(2) * q / one_plus_q,
        ratio,
    })
}

/// Evaluate a predicate on `q` exactly when it is a ratio, in floats otherwise.
fn with_q<T>(q: &Quality, f_exact: impl FnOnce(Exact) -> T, f_float: impl FnOnce(f64) -> T) -> T {
    match q.number().as_ratio() {
        Some(r) => f_exact(r.clone()),
        None => f_float(q.to_f64()),
    }
}

/// `q ≥ k/(k+1)`: nobody ever competes in a `k`-round game.
pub fn never_compete_threshold(k: u32, q: &Quality) -> bool {
    fn holds<S: Scalar>(k: u32, q: S) -> bool {
        let k = k as u64;
        !S::from_u64(k).exceeds(&(q * S::from_u64(k + 1)))
    }
    with_q(q, |r| holds(k, r), |f| holds(k, f))
}

/// `q/(1−q) < k ≤ 1/(1−q)`: from equal reputations the players compete in
/// the first round only.
pub fn compete_once_predicate(k: u32, q: &Quality) -> bool {
    fn holds<S: Scalar>(k: u32, q: S) -> bool {
        let slack = S::from_u64(k as u64) * (S::one() - q.clone());
        slack.exceeds(&q) && !slack.exceeds(&S::one())
    }
    with_q(q, |r| holds(k, r), |f| holds(k, f))
}

/// Ratio of a game that competes in round one and never again:
/// `(1 + (k−1)(1+q)) / (k(1+q))`.
pub fn compete_once_ratio<S: Scalar>(k: u32, q: &S) -> S {
    let one_plus_q = S::one() + q.clone();
    let k = S::from_u64(k as u64);
    (S::one() + (k.clone() - S::one()) * one_plus_q.clone()) / (k * one_plus_q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop32<S> {
    /// `⌈q/(1−q)⌉`, the worst round count.
    pub k_q: u32,
    pub epsilon: S,
    pub closed_form: S,
    /// Ratio of the solved game `G_{k_q, q}(1, 1)`.
    pub solved: S,
}

/// Closed-form ratio `(2q² + ε − εq²)/(q + q² + ε − εq²)` at
/// `k_q = q/(1−q) + ε`, with the matching solved ratio for comparison.
/// Exact when `q` is a ratio.
pub fn prop32_ratio<S: Scalar>(q: &Quality) -> Result<Prop32<S>> {
    let qs: S = q.value()?;
    if !qs.exceeds(&S::ratio(1, 2)) {
        return Err(Error::InvalidParameter(format!("q = {q} must exceed 1/2")));
    }
    let odds = qs.clone() / (S::one() - qs.clone());
    if odds.is_integral() {
        return Err(Error::NotApplicable(format!("q/(1−q) = {} is an integer, so ε = 0", odds.encode())));
    }
    let k_q = odds.floor_u64() + 1;
    let k_q = u32::try_from(k_q).map_err(|_| Error::InvalidParameter(format!("k_q = {k_q} is too large")))?;
    let eps = S::from_u64(k_q as u64) - odds;
    let q2 = qs.clone() * qs.clone();
    let closed_form = (S::from_u64(2) * q2.clone() + eps.clone() - eps.clone() * q2.clone())
        / (qs + q2.clone() + eps.clone() - eps.clone() * q2);
    let table = solve::<S>(&GameSpec::tullock(k_q, q.clone()))?;
    let solved = performance_ratio(&table)?.ratio;
    Ok(Prop32 { k_q, epsilon: eps, closed_form, solved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::solve_full;

    fn ratio_of(k: u32, q: Quality) -> Exact {
        performance_ratio(&solve::<Exact>(&GameSpec::tullock(k, q)).unwrap()).unwrap().ratio
    }

    #[test]
    fn hand_computed_ratios() {
        assert_eq!(ratio_of(2, Quality::ratio(3, 5).unwrap()), Exact::ratio(13, 16));
        assert_eq!(ratio_of(1, Quality::ratio(3, 10).unwrap()), Exact::ratio(10, 13));
        assert_eq!(ratio_of(4, Quality::ratio(4, 5).unwrap()), Exact::one());
    }

    #[test]
    fn ratio_undefined_for_empty_game() {
        let t = solve::<f64>(&GameSpec::tullock(0, Quality::decimal(0.3).unwrap())).unwrap();
        assert!(performance_ratio(&t).is_err());
    }

    #[test]
    fn thresholds() {
        assert!(never_compete_threshold(4, &Quality::ratio(4, 5).unwrap()));
        assert!(!never_compete_threshold(1, &Quality::decimal(0.3).unwrap()));
        assert!(never_compete_threshold(10, &Quality::decimal(0.95).unwrap()));
        assert!(!never_compete_threshold(4, &Quality::ratio(79, 100).unwrap()));

        assert!(compete_once_predicate(2, &Quality::ratio(3, 5).unwrap()));
        assert!(!compete_once_predicate(2, &Quality::decimal(0.8).unwrap()));
        assert!(!compete_once_predicate(3, &Quality::ratio(3, 5).unwrap()));
        // Right edge k = 1/(1−q) is included, left edge k = q/(1−q) is not.
        assert!(compete_once_predicate(2, &Quality::ratio(1, 2).unwrap()));
        assert!(!compete_once_predicate(1, &Quality::ratio(1, 2).unwrap()));
    }

    #[test]
    fn compete_once_window_matches_solver() {
        let q = Quality::ratio(3, 5).unwrap();
        let t = solve_full::<Exact>(&GameSpec::tullock(2, q)).unwrap();
        let r = performance_ratio(&t).unwrap();
        assert_eq!(r.ratio, compete_once_ratio(2, &Exact::ratio(3, 5)));
    }

    #[test]
    fn prop32_examples() {
        let r = prop32_ratio::<Exact>(&Quality::ratio(3, 5).unwrap()).unwrap();
        assert_eq!(r.k_q, 2);
        assert_eq!(r.closed_form, Exact::ratio(13, 16));
        assert_eq!(r.solved, r.closed_form);

        let r = prop32_ratio::<f64>(&Quality::decimal(0.7).unwrap()).unwrap();
        assert_eq!(r.k_q, 3);
        assert!((r.closed_form - r.solved).abs() < 1e-12);

        let r = prop32_ratio::<Exact>(&Quality::ratio(7, 10).unwrap()).unwrap();
        assert_eq!(r.closed_form, r.solved);

        assert!(matches!(prop32_ratio::<Exact>(&Quality::ratio(2, 3).unwrap()), Err(Error::NotApplicable(_))));
        assert!(prop32_ratio::<Exact>(&Quality::ratio(2, 5).unwrap()).is_err());
    }
}
