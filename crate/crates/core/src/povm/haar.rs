//! Haar-random pure states and Monte Carlo averages over them.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{identification_prob, DensePovm, Hypothesis, PureProductState, StateVector};
use crate::error::{domain, Result};
use crate::rng::{stream, Domain};
use crate::scalar::{cplx, lit, to_f64, Real};
use crate::stats::{FrequencyCheck, MeanAccumulator};
use crate::strategies::Priors;

/// Normalised standard complex Gaussian vector; sample `index` under `seed`.
pub fn haar_state<T: Real>(d: usize, seed: u64, index: u64) -> Result<StateVector<T>> {
    if d == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let mut rng = stream(seed, Domain::Haar, index);
    loop {
        let v: StateVector<T> = DVector::from_fn(d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            cplx(lit(re), lit(im))
        });
        let norm = v.norm();
        if norm > T::zero() {
            return Ok(v.unscale(norm));
        }
    }
}

fn local_dim<T: Real>(povm: &DensePovm<T>) -> Result<usize> {
    let n = povm.dim();
    let d = (n as f64).cbrt().round() as usize;
    if d * d * d != n {
        return Err(domain(format!("dimension {n} is not a cube")));
    }
    Ok(d)
}

/// Largest of `⟨Ψ₂|E₁|Ψ₂⟩` and `⟨Ψ₁|E₂|Ψ₁⟩` over `n_samples` Haar pairs.
pub fn no_error_check<T: Real>(povm: &DensePovm<T>, n_samples: u64, seed: u64) -> Result<T> {
    let d = local_dim(povm)?;
    let e1 = povm.element(1)?;
    let e2 = povm.element(2)?;
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let psi1 = haar_state::<T>(d, seed, 2 * i)?;
            let psi2 = haar_state::<T>(d, seed, 2 * i + 1)?;
            let s1 = PureProductState::new(psi1, psi2, Hypothesis::First)?;
            let s2 = PureProductState { which: Hypothesis::Second, ..s1.clone() };
            Ok(e1.expectation(&s2.vector()).abs().max(e2.expectation(&s1.vector()).abs()))
        })
        .try_reduce(T::zero, |a, b| Ok(a.max(b)))
}

/// Monte Carlo estimate of the Haar-averaged identification probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McMean {
    pub samples: u64,
    /// Mean of the exact per-pair probability.
    pub mean_probability: f64,
    pub std_error: f64,
    /// Bernoulli outcomes drawn with the per-pair probability, compared
    /// against `expected`.
    pub outcomes: FrequencyCheck,
}

impl McMean {
    pub fn within(&self, n_sigma: f64) -> bool {
        self.outcomes.within(n_sigma)
    }
}

/// Averages [`identification_prob`] over `n` Haar pairs and draws one
/// success/failure outcome per pair, checking the frequency against
/// `expected`.
pub fn mc_mean_identification<T: Real>(
    povm: &DensePovm<T>,
    priors: Priors<T>,
    n: u64,
    seed: u64,
    expected: f64,
) -> Result<McMean> {
    let d = local_dim(povm)?;
    let (acc, successes) = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(MeanAccumulator, u64)> {
            let psi1 = haar_state::<T>(d, seed, 2 * i)?;
            let psi2 = haar_state::<T>(d, seed, 2 * i + 1)?;
            let p = to_f64(identification_prob(povm, &psi1, &psi2, priors)?);
            let u: f64 = stream(seed, Domain::Outcome, i).random();
            let mut acc = MeanAccumulator::default();
            acc.push(p);
            Ok((acc, u64::from(u < p)))
        })
        .try_reduce(
            || (MeanAccumulator::default(), 0),
            |a, b| Ok((a.0.merge(b.0), a.1 + b.1)),
        )?;
    Ok(McMean {
        samples: n,
        mean_probability: acc.mean(),
        std_error: acc.std_error(),
        outcomes: FrequencyCheck::new(successes, n, expected),
    })
}
