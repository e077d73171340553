//! Deterministic helpers shared by unit tests.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Small splitmix-style generator so tests stay seed-stable without
/// pulling a full RNG into every module.
pub(crate) struct TestRng(u64);

impl TestRng {
    pub(crate) fn new(seed: u64) -> Self {
        Self(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub(crate) fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    pub(crate) fn next_centered(&mut self) -> f64 {
        self.next_f64() - 0.5
    }
}

pub(crate) fn test_random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = TestRng::new(seed);
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.next_centered(), rng.next_centered())
    })
}
