//! Reproducible random streams.
//!
//! Every unit of work (a trajectory, an i.i.d. sample) draws from its own
//! ChaCha8 stream: the key is the master seed and the 64-bit stream number
//! is a SplitMix64 hash of the work item's index path. Results therefore do
//! not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for the work item addressed by `path` under `master_seed`.
pub fn stream(master_seed: u64, path: &[u64]) -> SimRng {
    let id = path.iter().fold(0x5EED_u64, |acc, &k| splitmix64(acc ^ splitmix64(k)));
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(id);
    rng
}
