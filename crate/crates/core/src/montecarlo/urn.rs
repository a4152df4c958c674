use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analysis::split_distribution;
use crate::error::{Error, Result};
use crate::game::{tullock_prob, CompetitionRule, Reputation};
use crate::numeric::{Exact, Scalar};

use super::trial_rng;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UrnReport {
    pub t: u32,
    pub start: (Reputation, Reputation),
    pub trials: u64,
    /// Exact probability that player 1 wins `i` of the `t` contests.
    pub exact: Vec<String>,
    pub empirical: Vec<f64>,
    pub max_abs_deviation: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
}

impl UrnReport {
    pub fn passed(&self, max_deviation: f64, min_p_value: f64) -> bool {
        self.max_abs_deviation < max_deviation && self.p_value >= min_p_value
    }
}

/// Force `t` Tullock contests from `start` in each trial and compare the
/// histogram of player 1's win count with the exact urn law.
pub fn urn_split_check(t: u32, start: (Reputation, Reputation), trials: u64, master_seed: u64) -> Result<UrnReport> {
    if t == 0 || trials == 0 {
        return Err(Error::InvalidParameter("t and trials must be at least 1".into()));
    }
    let law = split_distribution::<Exact>(&CompetitionRule::Tullock, start.0, start.1, t)?;
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; t as usize + 1],
            |mut acc, trial| {
                let mut rng = trial_rng(master_seed, trial);
                let (mut a, mut b) = start;
                for _ in 0..t {
                    let c: f64 = tullock_prob(a, b).expect("reputations stay positive");
                    if rng.gen::<f64>() < c {
                        a += 1;
                    } else {
                        b += 1;
                    }
                }
                acc[(a - start.0) as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; t as usize + 1],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );

    let n = trials as f64;
    let mut max_dev = 0.0f64;
    let mut chi = 0.0;
    let mut bins = 0u64;
    for (p, &c) in law.iter().zip(&counts) {
        let p = p.to_f64();
        max_dev = max_dev.max((c as f64 / n - p).abs());
        if p > 0.0 {
            let expected = n * p;
            chi += (c as f64 - expected).powi(2) / expected;
            bins += 1;
        }
    }
    let dof = bins.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?.sf(chi)
    };
    Ok(UrnReport {
        t,
        start,
        trials,
        exact: law.iter().map(Scalar::encode).collect(),
        empirical: counts.iter().map(|&c| c as f64 / n).collect(),
        max_abs_deviation: max_dev,
        chi_square: chi,
        degrees_of_freedom: dof,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_split_from_one_one() {
        let r = urn_split_check(10, (1, 1), 100_000, 1).unwrap();
        assert!(r.exact.iter().all(|p| p == "1/11"));
        assert!(r.passed(0.01, 1e-4), "{r:?}");
    }

    #[test]
    fn single_draw_from_two_one() {
        let r = urn_split_check(1, (2, 1), 100_000, 2).unwrap();
        assert_eq!(r.exact, vec!["1/3", "2/3"]);
        assert!((r.empirical[1] - 2.0 / 3.0).abs() < 0.005);
    }

    #[test]
    fn symmetric_single_draw() {
        let r = urn_split_check(1, (1, 1), 10, 0).unwrap();
        assert_eq!(r.exact, vec!["1/2", "1/2"]);
        assert_eq!(r.degrees_of_freedom, 1);
    }
}
