//! Seeded generator streams.
//!
//! Every sampler takes a `&mut R: Rng`. Reproducible runs use [`stream`],
//! which derives stream `i` of a root seed as `ChaCha8Rng::seed_from_u64(root
//! + i)` (wrapping). Stream 0 is the single-stream generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent generator for shard `index` of a run rooted at `root_seed`.
pub fn stream(root_seed: u64, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(root_seed.wrapping_add(index))
}

/// Splits `count` items into `shards` contiguous chunk sizes; the first
/// `count % shards` chunks get one extra item.
pub fn shard_sizes(count: usize, shards: usize) -> Vec<usize> {
    let shards = shards.max(1);
    let base = count / shards;
    let extra = count % shards;
    (0..shards).map(|i| base + usize::from(i < extra)).collect()
}
