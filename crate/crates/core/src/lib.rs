//! Solver, analysis and simulation for the two-firm multi-round recruiting
//! game.

pub mod analysis;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod montecarlo;
pub mod numeric;
pub mod persist;
pub mod report;

pub use error::{Error, Result};
pub use game::{ActionProfile, CompetitionRule, GameSpec, Player, Quality, Reputation};
pub use numeric::{Exact, NumericMode, Number, Scalar};
