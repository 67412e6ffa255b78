//! Small helpers for Monte Carlo bookkeeping.

use serde::Serialize;

/// Standard deviation of a binomial frequency with success probability `p`
/// after `n` trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Running mean and standard error (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(mut self, other: Self) -> Self {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64) * (other.n as f64) / n as f64;
        self.n = n;
        self
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// A Bernoulli frequency together with the exact probability it estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyCheck {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub expected: f64,
    pub sigma: f64,
    /// `|frequency − expected| / σ`; zero when σ vanishes and the two agree.
    pub z: f64,
}

impl FrequencyCheck {
    pub fn new(successes: u64, trials: u64, expected: f64) -> Self {
        let frequency = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let sigma = binomial_sigma(expected, trials);
        let diff = (frequency - expected).abs();
        let z = if sigma > 0.0 {
            diff / sigma
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { trials, successes, frequency, expected, sigma, z }
    }

    pub fn within(&self, n_sigma: f64) -> bool {
        self.z <= n_sigma
    }
}
