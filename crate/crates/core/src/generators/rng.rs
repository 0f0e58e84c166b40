use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

/// Label written into reports so a run can be reproduced bit for bit.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.9) + rand_distr 0.5 StandardNormal; trial streams keyed by SHA-256(seed, spec, dim, trial)";

/// Seeded random stream with a draw counter.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    draws: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            draws: 0,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for one trial. Keyed by all four coordinates, so
    /// adding specs or dimensions never shifts another trial's draws.
    pub fn split(seed: u64, label: &str, dim: usize, trial: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"opineq/split/v1");
        hasher.update(seed.to_le_bytes());
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        hasher.update((dim as u64).to_le_bytes());
        hasher.update(trial.to_le_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        let mut head = [0u8; 8];
        head.copy_from_slice(&key[..8]);
        Self {
            seed: u64::from_le_bytes(head),
            draws: 0,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of scalar draws taken so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn normal(&mut self) -> f64 {
        self.draws += 1;
        self.inner.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.draws += 1;
        lo + (hi - lo) * self.inner.random::<f64>()
    }

    /// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.normal() * s, self.normal() * s)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.draws += 1;
        self.inner.random_range(0..len)
    }
}
