//! Closed-form bounds and thresholds for long games, under Tullock and under
//! the fixed-probability rule.

use serde::Serialize;

use crate::error::{Error, Result};

use super::binomial::binomial_cdf;

/// Default ε for the Tullock stop threshold.
pub const DEFAULT_EPSILON: f64 = 0.05;

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
    }
    Ok(())
}

/// `r̂ = min(q, 1/2)`.
pub fn r_hat(q: f64) -> f64 {
    q.min(0.5)
}

/// `(k−1)(1−q) + 1`, the most a lower player can gain over `(k−1)q` by
/// winning every remaining round.
fn upside(q: f64, k: u64) -> f64 {
    (k as f64 - 1.0) * (1.0 - q) + 1.0
}

/// `b_q(k, t, x) = x/t + (k−1)q + 3F_r̂(x, t)·((k−1)(1−q) + 1)`: upper bound
/// on the lower player's utility at reputations `(t−x, x)` once
/// `t > t_bound`.
pub fn b_bound(q: f64, k: u64, t: u64, x: u64) -> Result<f64> {
    check_q(q)?;
    if t == 0 || x > t {
        return Err(Error::InvalidParameter(format!("need t ≥ 1 and x ≤ t, got t = {t}, x = {x}")));
    }
    let f = binomial_cdf(r_hat(q), x, t);
    Ok(x as f64 / t as f64 + (k as f64 - 1.0) * q + 3.0 * f * upside(q, k))
}

/// `4 ln(1/12) / ln(1 − r̂)`.
pub fn t_bound(q: f64) -> f64 {
    4.0 * (1.0f64 / 12.0).ln() / (-r_hat(q)).ln_1p()
}

/// Parameters of the Tullock stop threshold for one `(q, ε)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitParams {
    pub q: f64,
    pub r_hat: f64,
    pub epsilon: f64,
    /// Relative reputation of the lower player, `r̂ − ε`.
    pub p: f64,
    pub t_bound: f64,
}

impl LimitParams {
    pub fn new(q: f64, epsilon: f64) -> Result<Self> {
        check_q(q)?;
        let r = r_hat(q);
        if !(epsilon > 0.0 && epsilon < r) {
            return Err(Error::InvalidParameter(format!("ε = {epsilon} must lie in (0, r̂ = {r})")));
        }
        Ok(LimitParams { q, r_hat: r, epsilon, p: r - epsilon, t_bound: t_bound(q) })
    }

    /// `(3 ln k − ln(q − p)) / (r̂ − p)²`.
    pub fn t_hoeffding(&self, k: u64) -> f64 {
        (3.0 * (k as f64).ln() - (self.q - self.p).ln()) / (self.epsilon * self.epsilon)
    }

    /// Smallest integer `t` with `t > t_bound` and `t ≥ t_hoeffding(k)`.
    pub fn t_star(&self, k: u64) -> u64 {
        let strict = self.t_bound.floor() as u64 + 1;
        strict.max(self.t_hoeffding(k).ceil() as u64)
    }

    /// Start `(t − x, x)` with `x = ⌊p·t⌋` at `t = t_star(k)`.
    pub fn start(&self, k: u64) -> (u64, u64) {
        let t = self.t_star(k);
        let x = ((self.p * t as f64).floor() as u64).max(1);
        (t - x, x)
    }

    /// Natural log of the round count from which the asymptotic guarantee
    /// applies, `ln(e^{8(r̂−ε)/ε³} + e^{t_bound})`. Reported, not enforced.
    pub fn ln_k_requirement(&self) -> f64 {
        let a = 8.0 * (self.r_hat - self.epsilon) / self.epsilon.powi(3);
        let b = self.t_bound;
        let m = a.max(b);
        m + ((a - m).exp() + (b - m).exp()).ln()
    }
}

/// Reputation total `t*` past which a player with relative reputation
/// `r̂ − ε` never competes in a `k`-round Tullock game.
pub fn stop_threshold_tullock(q: f64, epsilon: f64, k: u64) -> Result<u64> {
    Ok(LimitParams::new(q, epsilon)?.t_star(k))
}

/// Limit of the performance ratio of `G_k(1, 1)` as `k → ∞`:
/// `(1 + 2q·r̂)/(1 + q)`.
pub fn limit_ratio(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 + 2.0 * q * r_hat(q)) / (1.0 + q))
}

fn check_fixed_p(q: f64, p: f64) -> Result<()> {
    check_q(q)?;
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1/2)")));
    }
    if p >= q {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be below q = {q}; otherwise the players compete forever"
        )));
    }
    Ok(())
}

/// `b^p_q(k, d) = p + (p/(1−p))^d ((k−1)(1−q) + 1) + (k−1)q`: upper bound on
/// the lower player's utility at reputation gap `d` under the fixed-p rule.
pub fn fixed_p_bound(q: f64, p: f64, k: u64, d: u64) -> Result<f64> {
    check_fixed_p(q, p)?;
    let ratio = p / (1.0 - p);
    Ok(p + ratio.powf(d as f64) * upside(q, k) + (k as f64 - 1.0) * q)
}

/// Real-valued gap threshold
/// `(ln((k−1)(1−q) + 1) − ln(q − p)) / ln((1−p)/p)`.
pub fn fixed_p_stop_gap_real(q: f64, p: f64, k: u64) -> Result<f64> {
    check_fixed_p(q, p)?;
    Ok((upside(q, k).ln() - (q - p).ln()) / ((1.0 - p) / p).ln())
}

/// Integer gap `d*`: the lower player never competes at a gap above it.
pub fn fixed_p_stop_gap(q: f64, p: f64, k: u64) -> Result<u64> {
    Ok(fixed_p_stop_gap_real(q, p, k)?.ceil().max(0.0) as u64)
}

/// `d/(1−2p)`: bound on the expected steps for the reflected gap walk to
/// reach `d` from 0.
pub fn walk_expected_hitting(d: u64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1/2)")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    Ok(d as f64 / (1.0 - 2.0 * p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_bound_at_full_cdf_mass() {
        // x = t puts all binomial mass below x, so 3F = 3.
        let b = b_bound(0.3, 10, 20, 20).unwrap();
        assert!((b - (1.0 + 9.0 * 0.3 + 3.0 * (9.0 * 0.7 + 1.0))).abs() < 1e-12);
    }

    #[test]
    fn b_bound_direct_evaluation() {
        // F_{0.3}(2, 20) summed by hand from the three pmf terms.
        let f: f64 = [1.0, 20.0, 190.0]
            .iter()
            .enumerate()
            .map(|(i, c)| c * 0.3f64.powi(i as i32) * 0.7f64.powi(20 - i as i32))
            .sum();
        let expect = 2.0 / 20.0 + 3.0 * f * 10.0 + (1.0 - 3.0 * f) * 9.0 * 0.3;
        assert!((b_bound(0.3, 10, 20, 2).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn tullock_threshold_example() {
        let lp = LimitParams::new(0.3, 0.05).unwrap();
        assert!((lp.p - 0.25).abs() < 1e-15);
        let hoeff = (3.0 * 1000f64.ln() - 0.05f64.ln()) / 0.0025;
        let bound = 4.0 * (1.0 / 12.0f64).ln() / 0.7f64.ln();
        assert!((lp.t_bound - bound).abs() < 1e-12);
        assert_eq!(stop_threshold_tullock(0.3, 0.05, 1000).unwrap(), hoeff.max(bound).ceil() as u64);
        assert!(stop_threshold_tullock(0.3, 0.3, 1000).is_err());
        let mut last = 0;
        for k in [1u64, 10, 100, 1000, 10_000] {
            let t = stop_threshold_tullock(0.3, 0.05, k).unwrap();
            assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn t_star_is_strictly_above_t_bound() {
        // k = 1 with a large ε makes the Hoeffding term small.
        let lp = LimitParams::new(0.45, 0.4).unwrap();
        assert!(lp.t_star(1) as f64 > lp.t_bound);
    }

    #[test]
    fn limit_ratio_values() {
        let q = 1.5f64.sqrt() - 1.0;
        assert!((limit_ratio(q).unwrap() - 2.0 / (1.0 + 1.5f64.sqrt())).abs() < 1e-12);
        assert!((limit_ratio(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((limit_ratio(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!((limit_ratio(0.8).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_p_values() {
        let b = fixed_p_bound(0.5, 0.25, 100, 0).unwrap();
        assert!((b - 100.25).abs() < 1e-12);
        let b5 = fixed_p_bound(0.5, 0.25, 100, 5).unwrap();
        assert!((b5 - (0.25 + 50.5 / 243.0 + 49.5)).abs() < 1e-12);
        assert!(fixed_p_bound(0.3, 0.3, 10, 1).is_err());

        assert_eq!(fixed_p_stop_gap(0.5, 0.25, 100).unwrap(), 5);
        let real = fixed_p_stop_gap_real(0.5, 0.25, 100).unwrap();
        assert!((real - (50.5f64.ln() - 0.25f64.ln()) / 3f64.ln()).abs() < 1e-12);
        let mut last = 0;
        for k in [1u64, 10, 100, 1000, 10_000] {
            let d = fixed_p_stop_gap(0.5, 0.25, k).unwrap();
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn hitting_bound() {
        assert_eq!(walk_expected_hitting(4, 0.25).unwrap(), 8.0);
        assert!((walk_expected_hitting(1, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        assert!(walk_expected_hitting(3, 0.5).is_err());
    }
}
