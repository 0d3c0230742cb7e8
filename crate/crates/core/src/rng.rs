//! The single pseudo-random generator every stochastic part of the crate uses.
//!
//! The generator is SplitMix64 (Steele, Lea and Flood), written out here so a
//! port in any language produces the same stream:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15            (wrapping)
//! z      <- state
//! z      <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//! z      <- (z xor (z >> 27)) * 0x94D049BB133111EB (wrapping)
//! output <- z xor (z >> 31)
//! ```
//!
//! Derived quantities:
//!
//! * `next_f64`: `(next_u64() >> 11) * 2^-53`, uniform on `[0, 1)`.
//! * `below(n)`: rejection sampling on the top bits. With
//!   `zone = u64::MAX - (u64::MAX % n)`, draw `x` until `x < zone` and return
//!   `x % n`. Unbiased for every `n > 0`.
//! * Fisher-Yates shuffle runs `i` from `len-1` down to `1`, swapping `i`
//!   with `below(i + 1)`.
//! * Stream derivation: `derive_seed(seed, tags)` folds each tag in with
//!   `s <- mix(s xor mix(tag + 0x9E3779B97F4A7C15))`, where `mix` is the
//!   output function above applied to its argument.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function, usable as a standalone 64-bit hash.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a list of tags into a seed. Each distinct tag path yields an
/// independent-looking stream, and the result does not depend on anything
/// but `(seed, tags)`.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(seed, |s, &tag| {
        mix64(s ^ mix64(tag.wrapping_add(GOLDEN_GAMMA)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid output");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
