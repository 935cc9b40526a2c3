//! Seeded random streams.
//!
//! Every stochastic step draws from a ChaCha20 generator keyed by a 64-bit
//! seed. Independent sub-streams (one per replication, one per purpose inside
//! a replication) are selected with ChaCha's stream counter, so results do not
//! depend on thread scheduling or platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

/// Generator for `seed`, positioned on sub-stream `stream`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn from_seed(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Draws a fresh 64-bit seed for a downstream component.
pub fn child_seed(rng: &mut Rng) -> u64 {
    rng.next_u64()
}
