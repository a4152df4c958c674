//! Sampled play of the solved equilibrium, urn-law sampling and the
//! reflected gap walk.

mod simulate;
mod urn;
mod walk;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use simulate::{simulate, Histogram, RoundRecord, SimulateOptions, Simulation, StopStats, Trajectory};
pub use urn::{urn_split_check, UrnReport};
pub use walk::{reflected_walk_hitting, WalkReport};

/// Generator for one trial: the master seed picks the key, the trial index
/// picks the stream.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}
