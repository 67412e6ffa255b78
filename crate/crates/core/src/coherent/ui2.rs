//! Three-beamsplitter identification of an unknown coherent state against two
//! unknown references.
//!
//! Mode layout is `(D, A, B, C)`: `D` is a vacuum ancilla, `A` carries the
//! unknown state, `B` and `C` the references `α₁` and `α₂`. The first
//! splitter clones `A` into `D`, the other two compare the clones with the
//! references. Detector `P₂` watches `A` and `P₁` watches `C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detect::{sample_clicks, ClickPattern, Outcome};
use super::{monitored_amplitudes, BeamsplitterOp, Circuit, ComplexAmplitude, CoherentRegister, Detector};
use crate::error::{domain, Error, Result};
use crate::scalar::{one_minus_exp_neg, Real};

pub const UI2_MODE_D: usize = 0;
pub const UI2_MODE_A: usize = 1;
pub const UI2_MODE_B: usize = 2;
pub const UI2_MODE_C: usize = 3;

/// Which reference the unknown mode actually matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ui2Truth {
    First,
    Second,
}

impl Ui2Truth {
    pub fn index(self) -> usize {
        match self {
            Ui2Truth::First => 1,
            Ui2Truth::Second => 2,
        }
    }
}

/// Circuit for a given first-stage transmittivity `T₁ ∈ (0, 1)`.
///
/// The comparison stages use `T₂ = 1/(1+T₁)` and `T₃ = (1−T₁)/(2−T₁)`, which
/// send mode `A` (resp. `C`) to the vacuum whenever the unknown state equals
/// `α₁` (resp. `α₂`).
pub fn build_ui2_circuit<T: Real>(t1: T) -> Result<Circuit<T>> {
    if !(t1 > T::zero() && t1 < T::one()) {
        return Err(domain(format!("T1 = {t1} must lie strictly inside (0, 1)")));
    }
    let one = T::one();
    let two = one + one;
    let t2 = one / (one + t1);
    let t3 = (one - t1) / (two - t1);
    Circuit::new(
        4,
        vec![
            BeamsplitterOp::new(UI2_MODE_D, UI2_MODE_A, t1)?,
            BeamsplitterOp::new(UI2_MODE_B, UI2_MODE_A, t2)?,
            BeamsplitterOp::new(UI2_MODE_D, UI2_MODE_C, t3)?,
        ],
        vec![
            Detector { mode: UI2_MODE_A, label: "P2".into() },
            Detector { mode: UI2_MODE_C, label: "P1".into() },
        ],
    )
}

/// Input register `|0⟩_D |α_?⟩_A |α₁⟩_B |α₂⟩_C`.
pub fn ui2_input<T: Real>(
    alpha1: ComplexAmplitude<T>,
    alpha2: ComplexAmplitude<T>,
    truth: Ui2Truth,
) -> Result<CoherentRegister<T>> {
    let unknown = match truth {
        Ui2Truth::First => alpha1,
        Ui2Truth::Second => alpha2,
    };
    CoherentRegister::new(vec![ComplexAmplitude::zero(), unknown, alpha1, alpha2])
}

/// Decode a `(P₂ on A, P₁ on C)` reading.
///
/// A double click cannot happen for inputs obeying the promise; it is reported
/// as an error because it means the simulation itself is wrong.
pub fn classify_ui2(pattern: &ClickPattern) -> Result<Outcome> {
    match pattern.clicks.as_slice() {
        [false, false] => Ok(Outcome::Inconclusive),
        [false, true] => Ok(Outcome::Identified(1)),
        [true, false] => Ok(Outcome::Identified(2)),
        [true, true] => Err(Error::ImpossibleEvent("both detectors clicked".into())),
        other => Err(Error::Shape { expected: 2, got: other.len() }),
    }
}

/// Success probabilities `(P₁, P₂)` read off the simulated output amplitudes:
/// `P_k` is the click probability of the detector that identifies `α_k` when
/// the unknown state is `α_k`.
pub fn ui2_identification_probabilities<T: Real>(
    alpha1: ComplexAmplitude<T>,
    alpha2: ComplexAmplitude<T>,
    t1: T,
) -> Result<(T, T)> {
    let circuit = build_ui2_circuit(t1)?;
    let out1 = monitored_amplitudes(&circuit, &ui2_input(alpha1, alpha2, Ui2Truth::First)?)?;
    let out2 = monitored_amplitudes(&circuit, &ui2_input(alpha1, alpha2, Ui2Truth::Second)?)?;
    // monitored order is (A, C): P₁ sits on C, P₂ on A
    Ok((one_minus_exp_neg(out1[1].norm_sqr()), one_minus_exp_neg(out2[0].norm_sqr())))
}

/// One simulated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ui2Shot {
    pub seed: u64,
    pub shot: u64,
    pub clicks: ClickPattern,
    /// `None` marks a physically excluded double click.
    pub outcome: Option<Outcome>,
}

impl Ui2Shot {
    pub fn outcome_label(&self) -> String {
        match self.outcome {
            Some(o) => o.to_string(),
            None => "error".to_string(),
        }
    }
}

/// Tally of a batch of runs with a known truth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ui2Counts {
    pub shots: u64,
    pub identified_1: u64,
    pub identified_2: u64,
    pub inconclusive: u64,
    /// Double clicks.
    pub impossible: u64,
    /// Wrong identifications plus impossible events.
    pub error: u64,
}

/// Run `shots` independent shots of the circuit and classify each one.
pub fn simulate_ui2<T: Real>(
    alpha1: ComplexAmplitude<T>,
    alpha2: ComplexAmplitude<T>,
    truth: Ui2Truth,
    t1: T,
    shots: u64,
    seed: u64,
) -> Result<(Ui2Counts, Vec<Ui2Shot>)> {
    let circuit = build_ui2_circuit(t1)?;
    let output = super::run_circuit(&circuit, &ui2_input(alpha1, alpha2, truth)?)?;
    let records = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let clicks = sample_clicks(&output, &circuit, seed, shot)?;
            let outcome = classify_ui2(&clicks).ok();
            Ok(Ui2Shot { seed, shot, clicks, outcome })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = Ui2Counts { shots, ..Default::default() };
    for r in &records {
        match r.outcome {
            Some(Outcome::Identified(k)) => {
                if k == 1 {
                    counts.identified_1 += 1;
                } else {
                    counts.identified_2 += 1;
                }
                if k != truth.index() {
                    counts.error += 1;
                }
            }
            Some(Outcome::Inconclusive) => counts.inconclusive += 1,
            None => {
                counts.impossible += 1;
                counts.error += 1;
            }
        }
    }
    Ok((counts, records))
}
