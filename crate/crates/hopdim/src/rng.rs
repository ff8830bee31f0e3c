//! Deterministic, counter-splittable random streams.
//!
//! All simulation randomness flows through [`SplitMix64`] substreams derived
//! from a single master seed and a counter. The stream for counter `k`
//! depends only on `(master_seed, k)`, so a run partitioned into chunks or
//! spread over worker threads produces bit-identical results regardless of
//! chunk size or thread count: the Monte-Carlo engine uses one substream per
//! sample, keyed by the sample index.
//!
//! SplitMix64 is Steele, Lea and Flood's splittable generator (the core of
//! `java.util.SplittableRandom`): a 64-bit Weyl sequence passed through a
//! two-round xor-shift-multiply finalizer. It is not cryptographic, but its
//! statistical quality is more than adequate for collision counting and it
//! costs a handful of instructions per draw.

use rand::RngCore;

/// Weyl-sequence increment (2^64 / golden ratio, forced odd).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// `SplitMix64` finalizer: two rounds of xor-shift-multiply.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    /// Stream seeded directly from `seed`.
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Substream `counter` of the master seed.
    ///
    /// The initial state is `mix64(master_seed + counter * GOLDEN_GAMMA)`;
    /// the map `counter -> state` is injective for a fixed master seed, so
    /// distinct counters can never yield the same stream.
    pub fn substream(master_seed: u64, counter: u64) -> Self {
        Self {
            state: mix64(master_seed.wrapping_add(counter.wrapping_mul(GOLDEN_GAMMA))),
        }
    }

    #[inline]
    pub fn next_u64_raw(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }
}

impl RngCore for SplitMix64 {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64_raw() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.next_u64_raw()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let mut chunks = dest.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.next_u64_raw().to_le_bytes());
        }
        let rem = chunks.into_remainder();
        if !rem.is_empty() {
            let bytes = self.next_u64_raw().to_le_bytes();
            rem.copy_from_slice(&bytes[..rem.len()]);
        }
    }
}
