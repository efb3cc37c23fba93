use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random draw in the crate.
pub type SimRng = ChaCha8Rng;

/// Independent stream `stream` of the generator keyed by `seed`.
///
/// ChaCha streams do not overlap, so trial `i` always sees the same draws
/// no matter which worker runs it or in what order.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
