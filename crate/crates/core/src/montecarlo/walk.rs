use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::walk_expected_hitting;
use crate::error::Result;

use super::trial_rng;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkReport {
    pub d: u64,
    pub p: f64,
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    /// `d/(1−2p)`.
    pub bound: f64,
}

/// Mean steps for the reputation-gap walk to first reach `d` from 0. The walk
/// steps left with probability `p`, right otherwise, and always steps right
/// from 0.
pub fn reflected_walk_hitting(d: u64, p: f64, trials: u64, master_seed: u64) -> Result<WalkReport> {
    let bound = walk_expected_hitting(d, p)?;
    let (sum, sq) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(master_seed, trial);
            let (mut pos, mut steps) = (0u64, 0u64);
            while pos < d {
                steps += 1;
                if pos == 0 || rng.gen::<f64>() >= p {
                    pos += 1;
                } else {
                    pos -= 1;
                }
            }
            (steps as u128, (steps as u128).pow(2))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = trials.max(1) as f64;
    let mean = sum as f64 / n;
    let var = if trials > 1 { ((sq as f64 - sum as f64 * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(WalkReport { d, p, trials, mean, std_error: (var / n).sqrt(), bound })
}
