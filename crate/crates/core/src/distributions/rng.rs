use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every sampler in the crate.
pub type RngStream = ChaCha8Rng;

/// Independent stream `stream` of the key derived from `seed`.
///
/// Replicate `r` of an experiment uses `stream_rng(base_seed, r)`, so results
/// do not depend on which thread runs which replicate.
pub fn stream_rng(seed: u64, stream: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
