//! Performance ratios, round-count thresholds, t-binding games and the
//! closed-form bounds used for long games.

mod binding;
mod checks;
mod binomial;
mod bounds;
mod ratio;
mod sweep;

pub use binding::{split_distribution, t_binding_welfare};
pub use checks::{
    fixed_p_bound_check, fixed_p_gap_check, tullock_bound_check, tullock_stop_check, BoundCheck, GapCheck, StopCheck,
};
pub use binomial::{
    binomial_cdf, binomial_pmf, binomial_pmf_cdf, binomial_pmf_cdf_exact, cdf_step_slack, cdf_step_slack_exact,
    BinomialTriple,
};
pub use bounds::{
    b_bound, fixed_p_bound, fixed_p_stop_gap, fixed_p_stop_gap_real, limit_ratio, r_hat, stop_threshold_tullock,
    t_bound, walk_expected_hitting, LimitParams, DEFAULT_EPSILON,
};
pub use ratio::{
    compete_once_predicate, compete_once_ratio, never_compete_threshold, performance_ratio, prop32_ratio,
    PerformanceReport, Prop32,
};
pub use sweep::{sweep, ExactRow, SweepConfig, SweepReport, SweepRow};
