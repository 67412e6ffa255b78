//! Coherent states propagated through beamsplitter networks.
//!
//! A product of coherent states stays a product of coherent states under any
//! network of beamsplitters, so the full optical state is represented exactly
//! by one complex amplitude per mode. No Fock truncation happens here.

mod detect;
mod ui2;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

pub use detect::{no_click_probability, sample_clicks, ClickPattern, Outcome};
pub use ui2::{
    build_ui2_circuit, classify_ui2, simulate_ui2, ui2_identification_probabilities, ui2_input, Ui2Counts,
    Ui2Shot, Ui2Truth, UI2_MODE_A, UI2_MODE_B, UI2_MODE_C, UI2_MODE_D,
};

/// Complex amplitude `α` of a single-mode coherent state `|α⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ComplexAmplitude<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> ComplexAmplitude<T> {
    /// Checked constructor; rejects NaN and infinite components.
    pub fn new(re: T, im: T) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(domain("amplitude components must be finite"));
        }
        Ok(Self { re, im })
    }

    pub fn zero() -> Self {
        Self { re: T::zero(), im: T::zero() }
    }

    pub fn real(re: T) -> Self {
        Self { re, im: T::zero() }
    }

    /// `r e^{iφ}`.
    pub fn from_polar(r: T, phi: T) -> Self {
        Self { re: r * phi.cos(), im: r * phi.sin() }
    }

    pub fn value(self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    /// Mean photon number `|α|²`.
    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Real> From<Complex<T>> for ComplexAmplitude<T> {
    fn from(z: Complex<T>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl<T: Real> Add for ComplexAmplitude<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<T: Real> Sub for ComplexAmplitude<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: Real> Neg for ComplexAmplitude<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<T: Real> Mul<T> for ComplexAmplitude<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }
}

/// `|⟨a|b⟩|² = e^{-|a-b|²}`.
pub fn coherent_overlap_sq<T: Real>(a: ComplexAmplitude<T>, b: ComplexAmplitude<T>) -> T {
    (-(a - b).norm_sqr()).exp()
}

/// Two-mode mixing element acting on `(mode_a, mode_b)`.
///
/// Only the transmittivity is stored; the reflectivity is always `1 - T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BeamsplitterOp<T> {
    #[serde(rename = "a")]
    pub mode_a: usize,
    #[serde(rename = "b")]
    pub mode_b: usize,
    #[serde(rename = "t")]
    pub transmittivity: T,
}

impl<T: Real> BeamsplitterOp<T> {
    pub fn new(mode_a: usize, mode_b: usize, transmittivity: T) -> Result<Self> {
        let op = Self { mode_a, mode_b, transmittivity };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode_a == self.mode_b {
            return Err(Error::InvalidCircuit(format!(
                "beamsplitter acts twice on mode {}",
                self.mode_a
            )));
        }
        let t = self.transmittivity;
        if !(t.is_finite() && t >= T::zero() && t <= T::one()) {
            return Err(domain(format!("transmittivity {t} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn reflectivity(&self) -> T {
        T::one() - self.transmittivity
    }

    /// `(α, β) ↦ (√T α + √R β, −√R α + √T β)`.
    pub fn mix(&self, alpha: ComplexAmplitude<T>, beta: ComplexAmplitude<T>) -> (ComplexAmplitude<T>, ComplexAmplitude<T>) {
        let st = self.transmittivity.sqrt();
        let sr = self.reflectivity().sqrt();
        (alpha * st + beta * sr, beta * st - alpha * sr)
    }
}

/// Product coherent state over an ordered list of modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[serde(transparent)]
pub struct CoherentRegister<T> {
    amplitudes: Vec<ComplexAmplitude<T>>,
}

impl<T: Real> CoherentRegister<T> {
    pub fn new(amplitudes: Vec<ComplexAmplitude<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(domain("a register needs at least one mode"));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(domain("register amplitudes must be finite"));
        }
        Ok(Self { amplitudes })
    }

    /// `n` modes in the vacuum.
    pub fn vacuum(n: usize) -> Result<Self> {
        Self::new(vec![ComplexAmplitude::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[ComplexAmplitude<T>] {
        &self.amplitudes
    }

    pub fn get(&self, mode: usize) -> Result<ComplexAmplitude<T>> {
        self.amplitudes
            .get(mode)
            .copied()
            .ok_or(Error::ModeIndex { index: mode, n_modes: self.len() })
    }

    /// Total mean photon number `Σ|α_i|²`.
    pub fn energy(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }
}

/// Apply one beamsplitter, leaving every other mode untouched.
pub fn apply_beamsplitter<T: Real>(
    register: &CoherentRegister<T>,
    op: &BeamsplitterOp<T>,
) -> Result<CoherentRegister<T>> {
    let mut out = register.clone();
    apply_in_place(&mut out.amplitudes, op)?;
    Ok(out)
}

fn apply_in_place<T: Real>(modes: &mut [ComplexAmplitude<T>], op: &BeamsplitterOp<T>) -> Result<()> {
    op.validate()?;
    let n_modes = modes.len();
    for index in [op.mode_a, op.mode_b] {
        if index >= n_modes {
            return Err(Error::ModeIndex { index, n_modes });
        }
    }
    let (a, b) = op.mix(modes[op.mode_a], modes[op.mode_b]);
    modes[op.mode_a] = a;
    modes[op.mode_b] = b;
    Ok(())
}

/// A photodetector watching one mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Detector {
    pub mode: usize,
    pub label: String,
}

impl<'de> Deserialize<'de> for Detector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bare(usize),
            Full { mode: usize, #[serde(default)] label: Option<String> },
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Bare(mode) => Detector { mode, label: format!("m{mode}") },
            Repr::Full { mode, label } => Detector { mode, label: label.unwrap_or_else(|| format!("m{mode}")) },
        })
    }
}

/// Ordered beamsplitter network with a set of monitored output modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Circuit<T> {
    pub n_modes: usize,
    pub ops: Vec<BeamsplitterOp<T>>,
    pub monitored: Vec<Detector>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_modes: usize, ops: Vec<BeamsplitterOp<T>>, monitored: Vec<Detector>) -> Result<Self> {
        let circuit = Self { n_modes, ops, monitored };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidCircuit("circuit has no modes".into()));
        }
        for op in &self.ops {
            op.validate()?;
            for index in [op.mode_a, op.mode_b] {
                if index >= self.n_modes {
                    return Err(Error::ModeIndex { index, n_modes: self.n_modes });
                }
            }
        }
        for (i, det) in self.monitored.iter().enumerate() {
            if det.mode >= self.n_modes {
                return Err(Error::ModeIndex { index: det.mode, n_modes: self.n_modes });
            }
            if self.monitored[..i].iter().any(|d| d.mode == det.mode) {
                return Err(Error::InvalidCircuit(format!("mode {} monitored twice", det.mode)));
            }
        }
        Ok(())
    }

    pub fn monitored_modes(&self) -> Vec<usize> {
        self.monitored.iter().map(|d| d.mode).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let circuit: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidCircuit(e.to_string()))?;
        circuit.validate()?;
        Ok(circuit)
    }
}

/// Fold every beamsplitter of `circuit` over `input`, in order.
pub fn run_circuit<T: Real>(circuit: &Circuit<T>, input: &CoherentRegister<T>) -> Result<CoherentRegister<T>> {
    if input.len() != circuit.n_modes {
        return Err(Error::Shape { expected: circuit.n_modes, got: input.len() });
    }
    let mut modes = input.amplitudes.clone();
    for op in &circuit.ops {
        apply_in_place(&mut modes, op)?;
    }
    Ok(CoherentRegister { amplitudes: modes })
}

/// Amplitudes of the monitored modes after running the circuit.
pub fn monitored_amplitudes<T: Real>(
    circuit: &Circuit<T>,
    input: &CoherentRegister<T>,
) -> Result<Vec<ComplexAmplitude<T>>> {
    let out = run_circuit(circuit, input)?;
    circuit.monitored.iter().map(|d| out.get(d.mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn amp(re: f64, im: f64) -> ComplexAmplitude<f64> {
        ComplexAmplitude::new(re, im).unwrap()
    }

    #[test]
    fn balanced_splitter_cancels_equal_inputs() {
        let reg = CoherentRegister::new(vec![amp(0.3, -1.2), amp(0.3, -1.2)]).unwrap();
        let out = apply_beamsplitter(&reg, &BeamsplitterOp::new(0, 1, 0.5).unwrap()).unwrap();
        let s2 = 2f64.sqrt();
        assert_abs_diff_eq!(out.amplitudes()[0].re, 0.3 * s2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[0].im, -1.2 * s2, epsilon = 1e-15);
        assert_eq!(out.amplitudes()[1], ComplexAmplitude::zero());
    }

    #[test]
    fn unit_transmittivity_is_identity() {
        let reg = CoherentRegister::new(vec![amp(1.0, 2.0), amp(-0.5, 0.25)]).unwrap();
        let out = apply_beamsplitter(&reg, &BeamsplitterOp::new(0, 1, 1.0).unwrap()).unwrap();
        assert_eq!(out, reg);
    }

    #[test]
    fn sign_convention_on_single_input() {
        let reg = CoherentRegister::new(vec![amp(1.0, 0.0), amp(0.0, 0.0)]).unwrap();
        let out = apply_beamsplitter(&reg, &BeamsplitterOp::new(0, 1, 0.5).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out.amplitudes()[0].re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[1].re, -h, epsilon = 1e-15);
    }

    #[test]
    fn bad_mode_index_is_rejected() {
        let reg = CoherentRegister::<f64>::vacuum(2).unwrap();
        let op = BeamsplitterOp::new(0, 2, 0.5).unwrap();
        assert_eq!(apply_beamsplitter(&reg, &op), Err(Error::ModeIndex { index: 2, n_modes: 2 }));
        assert!(BeamsplitterOp::new(1, 1, 0.5f64).is_err());
        assert!(BeamsplitterOp::new(0, 1, 1.5f64).is_err());
    }

    #[test]
    fn overlap_values() {
        assert_eq!(coherent_overlap_sq(amp(0.4, 0.1), amp(0.4, 0.1)), 1.0);
        assert_abs_diff_eq!(coherent_overlap_sq(amp(1.0, 0.0), amp(0.0, 0.0)), (-1f64).exp(), epsilon = 1e-16);
        assert_abs_diff_eq!(coherent_overlap_sq(amp(1.0, 0.0), amp(-1.0, 0.0)), (-4f64).exp(), epsilon = 1e-16);
    }

    #[test]
    fn empty_circuit_leaves_input() {
        let reg = CoherentRegister::new(vec![amp(1.0, 2.0), amp(3.0, 4.0), amp(0.0, 0.0)]).unwrap();
        let circuit = Circuit::new(3, vec![], vec![]).unwrap();
        assert_eq!(run_circuit(&circuit, &reg).unwrap(), reg);
        let short = CoherentRegister::new(vec![amp(1.0, 0.0)]).unwrap();
        assert_eq!(run_circuit(&circuit, &short), Err(Error::Shape { expected: 3, got: 1 }));
    }

    #[test]
    fn non_finite_amplitudes_rejected() {
        assert!(ComplexAmplitude::new(f64::NAN, 0.0).is_err());
        assert!(ComplexAmplitude::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn circuit_json_round_trip_and_bare_detectors() {
        let text = r#"{"n_modes":3,"ops":[{"a":0,"b":1,"t":0.25},{"a":2,"b":1,"t":0.5}],"monitored":[1,{"mode":2,"label":"P"}]}"#;
        let c = Circuit::<f64>::from_json(text).unwrap();
        assert_eq!(c.ops[0].transmittivity, 0.25);
        assert_eq!(c.monitored[0].label, "m1");
        assert_eq!(c.monitored[1].label, "P");
        assert_eq!(Circuit::<f64>::from_json(&c.to_json()).unwrap(), c);
        let dup = r#"{"n_modes":3,"ops":[],"monitored":[1,1]}"#;
        assert!(Circuit::<f64>::from_json(dup).is_err());
    }
}
