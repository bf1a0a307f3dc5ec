//! Seed derivation and chunked Monte Carlo helpers.
//!
//! Every random stream is a `ChaCha8Rng` seeded from a 64-bit value derived
//! from a master seed and a path of integers (trial index, chunk index, ...).
//! Work is split into fixed-size chunks whose seeds depend only on the chunk
//! index, so results do not depend on how many worker threads run them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Rng = ChaCha8Rng;

/// Samples handled by one Monte Carlo chunk.
pub const CHUNK: usize = 4096;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and a path of indices.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p.wrapping_add(0x5851_f42d_4c95_7f2d))))
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_at(master: u64, path: &[u64]) -> Rng {
    rng_from(derive_seed(master, path))
}

/// Runs `f(rng, count)` on each chunk of `samples` in parallel and returns the
/// per-chunk results in chunk order.
pub fn map_chunks<T, F>(samples: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Rng, usize) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            let mut rng = rng_at(seed, &[c as u64]);
            f(&mut rng, count)
        })
        .collect()
}
