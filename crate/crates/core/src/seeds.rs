//! Deterministic seed derivation for the four named RNG streams.
//!
//! Every source of randomness in a trial is keyed off the trial seed through
//! one of four streams, so that e.g. validation episodes can never perturb
//! training randomness and parallel rollout scheduling cannot change results:
//!
//! * `EVOLUTION` — parameter init, parent selection, mutation noise
//! * `ENVIRONMENT` — per-episode start jitter during training rollouts
//! * `ARCHIVE` — stochastic novelty-archive insertion
//! * `VALIDATION` — per-episode start jitter during validation rollouts
//!
//! Episode seeds are derived by hashing `(trial seed, stream, generation,
//! individual index, repeat index)` with splitmix64, so rollouts can run in
//! any order on any number of workers and still see identical randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_EVOLUTION: u64 = 1;
pub const STREAM_ENVIRONMENT: u64 = 2;
pub const STREAM_ARCHIVE: u64 = 3;
pub const STREAM_VALIDATION: u64 = 4;

/// splitmix64 finalizer (Steele, Lea & Flood; same constants as Java's
/// SplittableRandom).
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable integer hash of a trial seed, a stream id, and up to three
/// positional parts (generation, individual index, repeat index).
pub fn derive_seed(trial_seed: u64, stream: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(trial_seed);
    h = splitmix64(h ^ stream);
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

/// RNG for a whole stream (evolution, archive): one sequential generator
/// consumed in a fixed order by the single-threaded parts of the loop.
pub fn stream_rng(trial_seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream, &[]))
}

/// RNG for one episode, identified by its coordinates within the trial.
pub fn episode_rng(
    trial_seed: u64,
    stream: u64,
    generation: u64,
    individual: u64,
    repeat: u64,
) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(
        trial_seed,
        stream,
        &[generation, individual, repeat],
    ))
}
