//! Reproducible random streams indexed by `(seed, replicate)`.
//!
//! The ChaCha8 key is four SplitMix64 outputs seeded by the master seed; the
//! replicate index selects the ChaCha stream (nonce). Streams therefore do
//! not depend on thread count or scheduling, and distinct replicates share a
//! key but never overlap.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer: a fixed bijective mixing of 64-bit words.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    replicate: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, replicate: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(replicate);
        RngStream {
            seed,
            replicate,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 from state 0.
        let mut s = 0;
        assert_eq!(splitmix64(&mut s), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(&mut s), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn frozen_stream_vectors() {
        let first = |seed, rep| {
            let mut r = RngStream::new(seed, rep);
            [r.next_u64(), r.next_u64(), r.next_u64()]
        };
        assert_eq!(first(0, 0), FROZEN_0_0);
        assert_eq!(first(42, 7), FROZEN_42_7);
    }

    #[test]
    fn streams_differ_by_replicate_and_seed() {
        let a = RngStream::new(1, 0).next_u64();
        let b = RngStream::new(1, 1).next_u64();
        let c = RngStream::new(2, 0).next_u64();
        assert!(a != b && a != c && b != c);
    }

    #[test]
    fn counter_advances() {
        let mut r = RngStream::new(5, 5);
        assert_eq!(r.counter(), 0);
        r.next_u64();
        assert_eq!(r.counter(), 2);
    }

    const FROZEN_0_0: [u64; 3] = [13804888775535289832, 4211859015901796865, 4415496932110364166];
    const FROZEN_42_7: [u64; 3] = [3822459529237854166, 8688307332784605643, 7210452555278872466];
}
