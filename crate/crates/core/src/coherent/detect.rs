//! Ideal threshold photodetection: a detector clicks iff at least one photon
//! is registered, with unit efficiency and no dark counts.

use std::fmt;

use rand::Rng;
use rand_distr::Open01;
use serde::{Deserialize, Serialize};

use super::{Circuit, ComplexAmplitude, CoherentRegister};
use crate::error::Result;
use crate::rng::{stream, Domain};
use crate::scalar::{to_f64, Real};

/// `|⟨0|α⟩|² = e^{-|α|²}`.
pub fn no_click_probability<T: Real>(amplitude: ComplexAmplitude<T>) -> T {
    (-amplitude.norm_sqr()).exp()
}

/// One detector reading per monitored mode, in circuit order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClickPattern {
    pub clicks: Vec<bool>,
}

impl ClickPattern {
    pub fn new(clicks: Vec<bool>) -> Self {
        Self { clicks }
    }

    pub fn len(&self) -> usize {
        self.clicks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clicks.is_empty()
    }

    pub fn count(&self) -> usize {
        self.clicks.iter().filter(|&&c| c).count()
    }
}

/// Classification of a single run. Hypotheses are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Identified(usize),
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Identified(k) => write!(f, "identified_{k}"),
            Outcome::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// Sample the monitored detectors of `circuit` for shot `shot`.
///
/// Detectors fire independently with probability `1 - e^{-|α|²}`. The draw is
/// a pure function of `(seed, shot)`; a mode in the exact vacuum never clicks.
pub fn sample_clicks<T: Real>(
    output: &CoherentRegister<T>,
    circuit: &Circuit<T>,
    seed: u64,
    shot: u64,
) -> Result<ClickPattern> {
    let mut rng = stream(seed, Domain::Clicks, shot);
    let clicks = circuit
        .monitored
        .iter()
        .map(|det| {
            let n = to_f64(output.get(det.mode)?.norm_sqr());
            let p_click = -(-n).exp_m1();
            let u: f64 = rng.sample(Open01);
            Ok(u < p_click)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClickPattern { clicks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::Detector;

    fn two_detector_circuit() -> Circuit<f64> {
        Circuit::new(
            2,
            vec![],
            vec![
                Detector { mode: 0, label: "x".into() },
                Detector { mode: 1, label: "y".into() },
            ],
        )
        .unwrap()
    }

    #[test]
    fn no_click_values() {
        assert_eq!(no_click_probability(ComplexAmplitude::<f64>::zero()), 1.0);
        let a = ComplexAmplitude::real(2f64.ln().sqrt());
        assert!((no_click_probability(a) - 0.5).abs() < 1e-15);
        let b = ComplexAmplitude::real(1.0f64);
        assert!((no_click_probability(b) - 0.367_879_441_171_442_3).abs() < 1e-15);
    }

    #[test]
    fn vacuum_never_clicks_and_bright_mode_almost_always_does() {
        let circuit = two_detector_circuit();
        let reg = CoherentRegister::new(vec![ComplexAmplitude::zero(), ComplexAmplitude::real(50f64.sqrt())]).unwrap();
        let mut silent_bright = 0;
        for shot in 0..10_000 {
            let p = sample_clicks(&reg, &circuit, 42, shot).unwrap();
            assert!(!p.clicks[0]);
            assert!(!(p.clicks[0] && p.clicks[1]));
            if !p.clicks[1] {
                silent_bright += 1;
            }
        }
        assert!(silent_bright <= 3);
    }

    #[test]
    fn sampling_is_deterministic_per_shot() {
        let circuit = two_detector_circuit();
        let reg = CoherentRegister::new(vec![ComplexAmplitude::real(0.8), ComplexAmplitude::real(1.1)]).unwrap();
        for shot in [0, 1, 17, 1 << 40] {
            assert_eq!(
                sample_clicks(&reg, &circuit, 9, shot).unwrap(),
                sample_clicks(&reg, &circuit, 9, shot).unwrap()
            );
        }
    }
}
