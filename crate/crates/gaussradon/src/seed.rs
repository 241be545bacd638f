//! Deterministic seed derivation and shard-structured RNG streams.
//!
//! Every stochastic operation takes an explicit master seed. Work is split
//! into fixed-size shards; shard `s` draws from an independent ChaCha stream
//! keyed by `(seed, s)`, and shard results are reduced in index order. The
//! outcome is therefore bit-identical no matter how shards are scheduled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::tol::SHARD_SIZE;

/// Derives a sub-seed for a named stage of a larger experiment, so that the
/// stages draw from unrelated streams while remaining reproducible.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    // SplitMix64 finalizer over the combined word.
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a hash of a stage tag, for use as a `derive_seed` salt.
pub fn stage_salt(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// RNG for one shard of a sharded computation.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Iterates `count` items in fixed-size shards, calling `body(shard_rng, len)`
/// once per shard in index order.
pub fn for_each_shard<F>(seed: u64, count: usize, mut body: F)
where
    F: FnMut(&mut ChaCha8Rng, usize),
{
    let mut remaining = count;
    let mut shard = 0u64;
    while remaining > 0 {
        let len = remaining.min(SHARD_SIZE);
        let mut rng = shard_rng(seed, shard);
        body(&mut rng, len);
        remaining -= len;
        shard += 1;
    }
}

/// Streaming mean / standard-error accumulator with shard-ordered reduction.
#[derive(Debug, Clone, Default)]
pub struct McAccumulator {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl McAccumulator {
    pub fn push(&mut self, value: f64) {
        self.count += 1;
        self.sum += value;
        self.sum_sq += value * value;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Standard error of the mean (unbiased sample variance / n, square root).
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    /// Merge another accumulator into this one. Callers must merge in shard
    /// index order to preserve bit-level determinism.
    pub fn merge(&mut self, other: &McAccumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }
}

/// Runs a sharded Monte Carlo estimate of the mean of `draw`.
pub fn mc_estimate<F>(seed: u64, count: usize, mut draw: F) -> McAccumulator
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    let mut shards: Vec<McAccumulator> = Vec::new();
    for_each_shard(seed, count, |rng, len| {
        let mut acc = McAccumulator::default();
        for _ in 0..len {
            acc.push(draw(rng));
        }
        shards.push(acc);
    });
    let mut total = McAccumulator::default();
    for acc in &shards {
        total.merge(acc);
    }
    total
}
