//! Search of an unknown coherent state among `N` unknown references.
//!
//! Mode layout for `N` references: ancillas `0..N−1`, the unknown state at
//! `N−1`, references `α_1..α_N` at `N..2N`. A distribution stage of `N−1`
//! splitters spreads the unknown state into `N` equal copies `α_?/√N`; each
//! copy is then compared with one reference on its own splitter. Comparator
//! `k` leaves its monitored mode in the vacuum exactly when `α_? = α_k`, so a
//! single silent detector identifies the match.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherent::{
    monitored_amplitudes, run_circuit, sample_clicks, BeamsplitterOp, Circuit, ClickPattern, ComplexAmplitude,
    CoherentRegister, Detector, Outcome,
};
use crate::error::{domain, Error, Result};
use crate::rng::{stream, Domain};
use crate::scalar::{lit, one_minus_exp_neg, to_f64, Real};
use crate::stats::FrequencyCheck;

/// References, their priors and (for simulation) the index of the reference
/// the unknown state equals. `true_index` is zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DatabaseSpec<T> {
    pub references: Vec<ComplexAmplitude<T>>,
    pub priors: Vec<T>,
    #[serde(default)]
    pub true_index: usize,
}

impl<T: Real> DatabaseSpec<T> {
    pub fn new(references: Vec<ComplexAmplitude<T>>, priors: Vec<T>, true_index: usize) -> Result<Self> {
        let spec = Self { references, priors, true_index };
        spec.validate()?;
        Ok(spec)
    }

    /// Equal priors.
    pub fn uniform(references: Vec<ComplexAmplitude<T>>, true_index: usize) -> Result<Self> {
        let n = references.len().max(1);
        let p = T::one() / lit(n as f64);
        Self::new(references, vec![p; n], true_index)
    }

    /// `α_k = α e^{2πik/N}`, equal priors.
    pub fn ring(alpha_modulus: T, n: usize) -> Result<Self> {
        let refs = (0..n)
            .map(|k| ComplexAmplitude::from_polar(alpha_modulus, T::two_pi() * lit(k as f64) / lit(n as f64)))
            .collect();
        Self::uniform(refs, 0)
    }

    pub fn n_refs(&self) -> usize {
        self.references.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_refs();
        if n < 2 {
            return Err(domain(format!("need at least 2 references, got {n}")));
        }
        if self.priors.len() != n {
            return Err(Error::Shape { expected: n, got: self.priors.len() });
        }
        if self.priors.iter().any(|p| !(*p >= T::zero() && *p <= T::one())) {
            return Err(domain("priors must lie in [0, 1]"));
        }
        let sum = self.priors.iter().fold(T::zero(), |a, b| a + *b);
        if (sum - T::one()).abs() > lit(1e-9) {
            return Err(domain(format!("priors sum to {sum}, not 1")));
        }
        if self.true_index >= n {
            return Err(Error::ModeIndex { index: self.true_index, n_modes: n });
        }
        if self.references.iter().any(|a| !a.is_finite()) {
            return Err(domain("non-finite reference amplitude"));
        }
        Ok(())
    }

    /// Smallest `|α_j − α_k|` over distinct pairs.
    pub fn min_separation(&self) -> T {
        let mut m: Option<T> = None;
        for (j, a) in self.references.iter().enumerate() {
            for b in &self.references[j + 1..] {
                let d = (*a - *b).abs();
                m = Some(m.map_or(d, |x| x.min(d)));
            }
        }
        m.unwrap_or_else(T::zero)
    }

    /// Pairs (zero-based) closer than `1e−9`; these make the search ambiguous.
    pub fn near_duplicates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.n_refs() {
            for k in j + 1..self.n_refs() {
                if to_f64((self.references[j] - self.references[k]).abs()) < 1e-9 {
                    out.push((j, k));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Distribute,
    Compare,
}

/// One splitter of the schedule; `j` counts from 1 within its stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ScheduleEntry<T> {
    pub stage: Stage,
    pub j: usize,
    pub transmittivity: T,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("need at least 2 references, got {n}")));
    }
    Ok(())
}

/// `T_j = (N−j)/(N−j+1)` for `j = 1..N−1`.
pub fn distribution_schedule<T: Real>(n: usize) -> Result<Vec<ScheduleEntry<T>>> {
    check_n(n)?;
    Ok((1..n)
        .map(|j| ScheduleEntry {
            stage: Stage::Distribute,
            j,
            transmittivity: lit::<T>((n - j) as f64) / lit((n - j + 1) as f64),
        })
        .collect())
}

/// Comparators `k = 1..N`. The first `N−1` use `T = N/(N+1)` with the
/// reference on the first port; the last uses `T = 1/(N+1)` with the
/// reference on the second port, so that its monitored mode carries
/// `(α_N − α_?)/√(N+1)` while the others carry `(α_? − α_k)/√(N+1)`.
pub fn comparator_schedule<T: Real>(n: usize) -> Result<Vec<ScheduleEntry<T>>> {
    check_n(n)?;
    let denom = lit::<T>((n + 1) as f64);
    Ok((1..=n)
        .map(|k| ScheduleEntry {
            stage: Stage::Compare,
            j: k,
            transmittivity: if k < n { lit::<T>(n as f64) / denom } else { T::one() / denom },
        })
        .collect())
}

/// Mode carrying the unknown state.
pub fn unknown_mode(n: usize) -> usize {
    n - 1
}

/// Mode of reference `k` (1-based).
pub fn reference_mode(n: usize, k: usize) -> usize {
    n + k - 1
}

/// Mode holding the copy of the unknown state compared with reference `k`.
pub fn copy_mode(n: usize, k: usize) -> usize {
    if k == 1 {
        unknown_mode(n)
    } else {
        k - 2
    }
}

/// Full `2N`-mode circuit with `2N−1` splitters; detector `k` watches the
/// output of comparator `k`.
pub fn build_database_circuit<T: Real>(n: usize) -> Result<Circuit<T>> {
    check_n(n)?;
    let mut ops = Vec::with_capacity(2 * n - 1);
    for e in distribution_schedule::<T>(n)? {
        ops.push(BeamsplitterOp::new(e.j - 1, unknown_mode(n), e.transmittivity)?);
    }
    let mut monitored = Vec::with_capacity(n);
    for e in comparator_schedule::<T>(n)? {
        let k = e.j;
        let (copy, reference) = (copy_mode(n, k), reference_mode(n, k));
        if k < n {
            ops.push(BeamsplitterOp::new(reference, copy, e.transmittivity)?);
            monitored.push(Detector { mode: copy, label: format!("P{k}") });
        } else {
            ops.push(BeamsplitterOp::new(copy, reference, e.transmittivity)?);
            monitored.push(Detector { mode: reference, label: format!("P{k}") });
        }
    }
    Circuit::new(2 * n, ops, monitored)
}

/// `|0⟩^{N−1} |α_?⟩ |α_1⟩…|α_N⟩`.
pub fn database_input<T: Real>(
    references: &[ComplexAmplitude<T>],
    unknown: ComplexAmplitude<T>,
) -> Result<CoherentRegister<T>> {
    let n = references.len();
    check_n(n)?;
    let mut amps = vec![ComplexAmplitude::zero(); n - 1];
    amps.push(unknown);
    amps.extend_from_slice(references);
    CoherentRegister::new(amps)
}

/// Exactly one silent detector `k` gives `Identified(k)` (1-based); every
/// other pattern is inconclusive.
pub fn classify_database(pattern: &ClickPattern) -> Outcome {
    let mut silent = pattern.clicks.iter().enumerate().filter(|(_, c)| !**c);
    match (silent.next(), silent.next()) {
        (Some((k, _)), None) => Outcome::Identified(k + 1),
        _ => Outcome::Inconclusive,
    }
}

/// Monitored amplitudes `m_jk` (row `j`: unknown equal to `α_j`).
pub fn monitored_matrix<T: Real>(spec: &DatabaseSpec<T>) -> Result<Vec<Vec<ComplexAmplitude<T>>>> {
    spec.validate()?;
    let circuit = build_database_circuit::<T>(spec.n_refs())?;
    spec.references
        .iter()
        .map(|&unknown| monitored_amplitudes(&circuit, &database_input(&spec.references, unknown)?))
        .collect()
}

/// `Π_{k≠j}(1 − e^{−|m_jk|²})` for every `j`.
pub fn conditional_success<T: Real>(spec: &DatabaseSpec<T>) -> Result<Vec<T>> {
    Ok(monitored_matrix(spec)?
        .iter()
        .enumerate()
        .map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .fold(T::one(), |acc, (_, m)| acc * one_minus_exp_neg(m.norm_sqr()))
        })
        .collect())
}

/// `Σ_j η_j Π_{k≠j}(1 − e^{−|m_jk|²})` from the simulated circuit.
pub fn success_probability<T: Real>(spec: &DatabaseSpec<T>) -> Result<T> {
    let cond = conditional_success(spec)?;
    Ok(spec.priors.iter().zip(&cond).fold(T::zero(), |acc, (eta, p)| acc + *eta * *p))
}

/// Closed form `Σ_j η_j Π_{k≠j}(1 − e^{−c|α_k − α_j|²})` for an arbitrary
/// exponent constant `c`.
pub fn success_probability_closed_form<T: Real>(spec: &DatabaseSpec<T>, c: T) -> Result<T> {
    spec.validate()?;
    let refs = &spec.references;
    Ok((0..refs.len()).fold(T::zero(), |acc, j| {
        let prod = (0..refs.len())
            .filter(|&k| k != j)
            .fold(T::one(), |p, k| p * one_minus_exp_neg(c * (refs[k] - refs[j]).norm_sqr()));
        acc + spec.priors[j] * prod
    }))
}

/// Exponent constant implied by the circuit: `1/(N+1)`.
pub fn circuit_constant<T: Real>(n: usize) -> T {
    T::one() / lit((n + 1) as f64)
}

/// Alternative constant `1/√(N−1)` quoted alongside for comparison.
pub fn printed_constant<T: Real>(n: usize) -> T {
    T::one() / lit::<T>((n - 1) as f64).sqrt()
}

/// [`success_probability_closed_form`] with [`printed_constant`].
pub fn success_probability_printed<T: Real>(spec: &DatabaseSpec<T>) -> Result<T> {
    success_probability_closed_form(spec, printed_constant(spec.n_refs()))
}

/// Ring configuration `α_k = α e^{2πik/N}` at equal priors:
/// `Π_{k=1}^{N−1}(1 − e^{−c·2α²(1 − cos(2πk/N))})`.
pub fn ring_probability_with<T: Real>(alpha_modulus: T, n: usize, c: T) -> Result<T> {
    check_n(n)?;
    if !(alpha_modulus >= T::zero()) {
        return Err(domain("ring modulus must be non-negative"));
    }
    let two = T::one() + T::one();
    Ok((1..n).fold(T::one(), |acc, k| {
        let angle = T::two_pi() * lit(k as f64) / lit(n as f64);
        acc * one_minus_exp_neg(c * two * alpha_modulus * alpha_modulus * (T::one() - angle.cos()))
    }))
}

/// [`ring_probability_with`] at the circuit constant `1/(N+1)`.
pub fn ring_probability<T: Real>(alpha_modulus: T, n: usize) -> Result<T> {
    ring_probability_with(alpha_modulus, n, circuit_constant(n))
}

/// How the unknown state is chosen shot by shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthMode {
    /// Always `spec.true_index`.
    Fixed,
    /// Drawn from the priors for every shot.
    Sampled,
}

/// Tally of simulated database runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatabaseCounts {
    pub shots: u64,
    pub correct: u64,
    pub inconclusive: u64,
    pub misidentified: u64,
    /// Number of shots in which each reference was the truth.
    pub truth_histogram: Vec<u64>,
}

impl DatabaseCounts {
    pub fn success_frequency(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.correct as f64 / self.shots as f64
        }
    }
}

/// Monte Carlo run of the search circuit.
pub fn simulate_database<T: Real>(
    spec: &DatabaseSpec<T>,
    mode: TruthMode,
    shots: u64,
    seed: u64,
) -> Result<DatabaseCounts> {
    spec.validate()?;
    let n = spec.n_refs();
    let circuit = build_database_circuit::<T>(n)?;
    let outputs = spec
        .references
        .iter()
        .map(|&u| run_circuit(&circuit, &database_input(&spec.references, u)?))
        .collect::<Result<Vec<_>>>()?;
    let cumulative: Vec<f64> = spec
        .priors
        .iter()
        .scan(0.0, |acc, p| {
            *acc += to_f64(*p);
            Some(*acc)
        })
        .collect();

    let per_shot = (0..shots)
        .into_par_iter()
        .map(|shot| -> Result<(usize, Outcome)> {
            let truth = match mode {
                TruthMode::Fixed => spec.true_index,
                TruthMode::Sampled => {
                    let u: f64 = stream(seed, Domain::Prior, shot).random();
                    cumulative.iter().position(|c| u < *c).unwrap_or(n - 1)
                }
            };
            let clicks = sample_clicks(&outputs[truth], &circuit, seed, shot)?;
            Ok((truth, classify_database(&clicks)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = DatabaseCounts {
        shots,
        correct: 0,
        inconclusive: 0,
        misidentified: 0,
        truth_histogram: vec![0; n],
    };
    for (truth, outcome) in per_shot {
        counts.truth_histogram[truth] += 1;
        match outcome {
            Outcome::Identified(k) if k == truth + 1 => counts.correct += 1,
            Outcome::Identified(_) => counts.misidentified += 1,
            Outcome::Inconclusive => counts.inconclusive += 1,
        }
    }
    Ok(counts)
}

/// Monte Carlo versus circuit-derived success probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatabaseReport {
    pub n: usize,
    pub p_analytic_circuit: f64,
    pub p_paper_constant: f64,
    pub constant_circuit: f64,
    pub constant_printed: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub shots: u64,
    pub misidentified: u64,
    pub z: f64,
    pub counts: DatabaseCounts,
}

/// Simulate with truths drawn from the priors and compare against
/// [`success_probability`].
pub fn database_report<T: Real>(spec: &DatabaseSpec<T>, shots: u64, seed: u64) -> Result<DatabaseReport> {
    let n = spec.n_refs();
    let p = to_f64(success_probability(spec)?);
    let counts = simulate_database(spec, TruthMode::Sampled, shots, seed)?;
    let check = FrequencyCheck::new(counts.correct, shots, p);
    Ok(DatabaseReport {
        n,
        p_analytic_circuit: p,
        p_paper_constant: to_f64(success_probability_printed(spec)?),
        constant_circuit: to_f64(circuit_constant::<T>(n)),
        constant_printed: to_f64(printed_constant::<T>(n)),
        mc_estimate: check.frequency,
        mc_stderr: check.sigma,
        shots,
        misidentified: counts.misidentified,
        z: check.z,
        counts,
    })
}
