//! Seeded random streams.
//!
//! Every consumer of randomness gets its own ChaCha8 stream derived from
//! the run seed, so problem masses and network noise never share draws and
//! results are identical across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used to draw evidence masses.
pub const PROBLEM_STREAM: u64 = 0;
/// Stream used to draw initial input-voltage noise.
pub const NOISE_STREAM: u64 = 1;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
