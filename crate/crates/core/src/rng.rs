//! Seed derivation. Every trial owns a ChaCha8 stream keyed by the master
//! seed, so trials can run in any order or thread and still reproduce.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Independent sub-streams of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Random payload generation.
    Payload = 0,
    /// Channel noise, shuffle and sampling.
    Channel = 1,
    /// Codebook draws in the converse lab.
    Codebook = 2,
}

const STREAMS_PER_TRIAL: u64 = 4;

/// Generator for `(master seed, trial index, stream)`.
pub fn trial_rng(master: u64, trial: u64, stream: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial.wrapping_mul(STREAMS_PER_TRIAL).wrapping_add(stream as u64));
    rng
}

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
