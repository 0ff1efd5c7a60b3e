//! Seeded, splittable random streams.
//!
//! Built on the counter-based ChaCha8 generator: identical `(seed, stream_id)`
//! pairs produce identical draw sequences on every platform, and independent
//! components (initialization, dropout, sampling) derive their own streams
//! instead of sharing one cursor.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream-id domains for the major consumers; combined with small indices
/// via [`RngStream::compose`] so schedules never collide.
pub mod domains {
    pub const INIT: u64 = 1;
    pub const SPLIT: u64 = 2;
    pub const SHUFFLE: u64 = 3;
    pub const DROPOUT: u64 = 4;
    pub const SAMPLING: u64 = 5;
    pub const GENERATOR: u64 = 6;
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    /// A fresh stream with the same seed and a different stream id. The
    /// child starts at the beginning of its stream regardless of how much
    /// the parent has consumed.
    pub fn child(&self, stream_id: u64) -> Self {
        RngStream::new(self.seed, stream_id)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Mixes a domain tag and up to three indices into one stream id
    /// (splitmix64 finalizer, deterministic across platforms).
    pub fn compose(domain: u64, a: u64, b: u64, c: u64) -> u64 {
        let mut z = domain
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(a)
            .wrapping_mul(0xbf58_476d_1ce4_e5b9)
            .wrapping_add(b)
            .wrapping_mul(0x94d0_49bb_1331_11eb)
            .wrapping_add(c);
        z ^= z >> 31;
        z = z.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z ^= z >> 29;
        z
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw via Box-Muller; stateless so cloned streams
    /// stay in lockstep.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `[0, n)` by widening multiply.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }

    /// Poisson draw. Knuth's method for small rates, normal approximation
    /// above 64 where the product would underflow.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        debug_assert!(lambda >= 0.0);
        if lambda == 0.0 {
            return 0;
        }
        if lambda > 64.0 {
            let draw = lambda + lambda.sqrt() * self.normal();
            return draw.round().max(0.0) as u64;
        }
        let limit = (-lambda).exp();
        let mut k = 0u64;
        let mut prod = self.uniform();
        while prod > limit {
            k += 1;
            prod *= self.uniform();
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seed_and_stream_reproduce_draws() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1_000_000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_streams_differ() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert!(same < 4);
    }

    #[test]
    fn child_starts_fresh() {
        let parent = RngStream::new(9, 0);
        let mut c1 = parent.child(5);
        let mut c2 = RngStream::new(9, 5);
        for _ in 0..100 {
            assert_eq!(c1.next_u64(), c2.next_u64());
        }
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn normal_moments() {
        let mut rng = RngStream::new(2, 0);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = rng.normal();
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn poisson_mean_matches_rate() {
        let mut rng = RngStream::new(3, 0);
        let lambda = 0.08;
        let n = 100_000;
        let total: u64 = (0..n).map(|_| rng.poisson(lambda)).sum();
        let mean = total as f64 / n as f64;
        // 3 standard errors of the sample mean
        let se = (lambda / n as f64).sqrt();
        assert!((mean - lambda).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = RngStream::new(4, 0);
        let mut xs: Vec<usize> = (0..100).collect();
        rng.shuffle(&mut xs);
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }
}
