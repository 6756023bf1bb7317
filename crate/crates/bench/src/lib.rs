//! Shared fixtures for the sampler benchmarks.

use grouprand_core::RandomStream;

/// Fixed seed so benchmark runs are comparable across checkouts.
pub const BENCH_SEED: u64 = 0xB43C_5EED;

pub fn bench_stream() -> RandomStream {
    RandomStream::new(BENCH_SEED)
}
