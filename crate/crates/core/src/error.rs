use thiserror::Error;

use crate::game::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: reputations ({x1}, {x2}) have zero total")]
    InvalidState { x1: u64, x2: u64 },

    #[error("exact mode: {0}")]
    NotExact(String),

    #[error("competition rule rejected: {0}")]
    RuleViolation(AxiomViolation),

    #[error(
        "resource limit: k = {k} needs {states} states (~{bytes} bytes), budget is {budget} bytes"
    )]
    ResourceLimit { k: u32, states: u128, bytes: u128, budget: u128 },

    #[error("operation needs a fully retained table; re-solve with full retention")]
    RequiresFullTable,

    #[error("k = {k} exceeds the limit of {max} for {what}")]
    TooLarge { what: &'static str, k: u32, max: u32 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
