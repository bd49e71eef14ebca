//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a hash of the
//! `(master_seed, problem_index, run_index, lane)` tuple. ChaCha is counter
//! based, so a stream depends only on its key and never on which worker
//! thread happens to drive it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Key of a random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub problem_index: u64,
    pub run_index: u64,
    /// Optional extra derivation level, used to split one run into
    /// independent sub-streams (environment rewards vs. policy noise).
    pub lane: Option<u64>,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, problem_index: u64, run_index: u64) -> Self {
        Self {
            master_seed,
            problem_index,
            run_index,
            lane: None,
        }
    }

    pub const fn with_lane(self, lane: u64) -> Self {
        Self {
            lane: Some(lane),
            ..self
        }
    }

    /// 256-bit key for the stream cipher.
    fn key(&self) -> [u8; 32] {
        let (flag, lane) = match self.lane {
            Some(l) => (1, l),
            None => (0, 0),
        };
        let mut state = splitmix(self.master_seed ^ 0x5048_455f_5345_4544);
        for (i, word) in [self.problem_index, self.run_index, flag, lane].into_iter().enumerate() {
            state = splitmix(state ^ splitmix(word.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1))));
        }
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&splitmix(state).to_le_bytes());
        }
        key
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A single-owner stream of uniform 64-bit words.
#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn from_seed_spec(seed: SeedSpec) -> Self {
        Self(ChaCha8Rng::from_seed(seed.key()))
    }
}

/// Derives the stream keyed by `seed`.
pub fn derive_stream(seed: SeedSpec) -> Stream {
    Stream::from_seed_spec(seed)
}

impl RngCore for Stream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
