use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{validate_on_box, GameSpec, ResolvedRule};
use crate::numeric::{NumericMode, Scalar};

use super::evaluate_state;
use super::table::{EquilibriumTable, Layer};

/// Default memory ceiling for a solve, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u128 = 3 << 30;

/// Layers shorter than this are evaluated on the calling thread.
const PARALLEL_LAYER_MIN: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Retention {
    /// Keep two layers while solving and return only the root layer.
    RootOnly,
    /// Keep every layer; needed by the verifiers, t-binding and simulation.
    Full,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub retention: Retention,
    /// Value non-compete states in closed form instead of by recursion.
    pub short_circuit: bool,
    pub memory_budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { retention: Retention::RootOnly, short_circuit: false, memory_budget: DEFAULT_MEMORY_BUDGET }
    }
}

impl SolveOptions {
    pub fn full() -> Self {
        SolveOptions { retention: Retention::Full, ..Default::default() }
    }
}

/// Solve keeping only the root layer.
pub fn solve<S: Scalar>(spec: &GameSpec) -> Result<EquilibriumTable<S>> {
    solve_with(spec, &SolveOptions::default())
}

/// Solve keeping every layer.
pub fn solve_full<S: Scalar>(spec: &GameSpec) -> Result<EquilibriumTable<S>> {
    solve_with(spec, &SolveOptions::full())
}

fn bytes_per_state<S: Scalar>() -> u128 {
    let heap = match S::MODE {
        NumericMode::Exact => 96,
        NumericMode::Float => 0,
    };
    (2 * std::mem::size_of::<S>() + 1 + heap) as u128
}

pub fn solve_with<S: Scalar>(spec: &GameSpec, opts: &SolveOptions) -> Result<EquilibriumTable<S>> {
    let k = spec.k();
    let states = match opts.retention {
        Retention::Full => spec.state_count(),
        Retention::RootOnly => 2 * (k as u128 + 1),
    };
    let bytes = states * bytes_per_state::<S>();
    if bytes > opts.memory_budget {
        return Err(Error::ResourceLimit { k, states: spec.state_count(), bytes, budget: opts.memory_budget });
    }

    let q: S = spec.q().value()?;
    let rule: ResolvedRule<S> = spec.rule().resolve()?;
    let (r1, r2) = spec.start();
    if !spec.rule().is_builtin() && k > 0 {
        let lo = r1.min(r2);
        let hi = r1.max(r2) + k as u64;
        let report = validate_on_box::<S>(spec.rule(), lo, hi)?;
        if let Some(v) = report.violation {
            return Err(Error::RuleViolation(v));
        }
    }

    let mut layers: Vec<Layer<S>> = Vec::new();
    let mut prev = Layer::terminal(k as usize + 1);
    for j in 1..=k {
        let played = (k - j) as u64;
        let len = played as usize + 1;
        let mut next = Layer {
            profiles: vec![crate::game::ActionProfile::Compete; len],
            u1: vec![S::zero(); len],
            u2: vec![S::zero(); len],
        };
        let eval = |i: usize| {
            let x1 = r1 + i as u64;
            let x2 = r2 + played - i as u64;
            let c = rule.p1_wins(x1, x2);
            evaluate_state(
                j,
                &q,
                &c,
                x1,
                x2,
                (&prev.u1[i + 1], &prev.u2[i + 1]),
                (&prev.u1[i], &prev.u2[i]),
                opts.short_circuit,
            )
        };
        if len >= PARALLEL_LAYER_MIN {
            next.profiles
                .par_iter_mut()
                .zip(next.u1.par_iter_mut())
                .zip(next.u2.par_iter_mut())
                .enumerate()
                .for_each(|(i, ((p, a), b))| {
                    let (profile, u1, u2) = eval(i);
                    *p = profile;
                    *a = u1;
                    *b = u2;
                });
        } else {
            for i in 0..len {
                let (profile, u1, u2) = eval(i);
                next.profiles[i] = profile;
                next.u1[i] = u1;
                next.u2[i] = u2;
            }
        }
        let done = std::mem::replace(&mut prev, next);
        if opts.retention == Retention::Full {
            layers.push(done);
        }
    }
    layers.push(prev);
    if opts.retention == Retention::RootOnly {
        let root = layers.pop().expect("root layer");
        layers = vec![root];
    }
    Ok(EquilibriumTable { spec: spec.clone(), retention: opts.retention, layers })
}
