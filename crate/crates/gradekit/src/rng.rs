//! Pinned pseudo-random generator for every seeded operation in the toolkit.
//!
//! The algorithm is fixed forever so that dataset splits, mistake sampling
//! and any other seeded artifact replicate bit-for-bit across runs, platforms
//! and reimplementations in other languages:
//!
//! * State initialization: four rounds of SplitMix64 over the user seed.
//! * Stream: xoshiro256** (a 64-bit xorshift-class generator).
//! * `range(n)`: `next_u64() % n`. The modulo bias is irrelevant for the
//!   collection sizes involved here and keeps the mapping trivially portable.
//! * `shuffle`: Fisher-Yates from the last index down, `j = range(i + 1)`.

#[derive(Debug, Clone)]
pub struct SeededRng {
    state: [u64; 4],
}

fn splitmix64(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *seed;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        let state = [
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
        ];
        SeededRng { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform-ish value in `0..n`. Panics if `n == 0`.
    pub fn range(&mut self, n: u64) -> u64 {
        assert!(n > 0, "range bound must be positive");
        self.next_u64() % n
    }

    /// In-place Fisher-Yates shuffle with the pinned index order.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        if items.len() < 2 {
            return;
        }
        for i in (1..items.len()).rev() {
            let j = self.range(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
