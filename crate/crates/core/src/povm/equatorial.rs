//! Identification restricted to equatorial qubits
//! `|φ⟩ = (|0⟩ + e^{iφ}|1⟩)/√2`.
//!
//! Averaging the hypotheses over the equator gives
//! `Ω₁ = (1/8) 1_C ⊗ (|00⟩⟨00| + |11⟩⟨11| + 2|ψ⁺⟩⟨ψ⁺|)_AB` and the analogous
//! `Ω₂` on `AC`. Conclusive elements must live on the kernels of the opposite
//! average state, spanned by `|j⟩_B|ψ⁻⟩_AC` and `|j⟩_C|ψ⁻⟩_AB`; on those
//! kernels the averaged success probability has the same form as for the full
//! Bloch sphere, so the optimum coincides with the universal qubit POVM.

use nalgebra::DVector;

use super::tensor::{embed_pair, index3, SYS_A, SYS_B, SYS_C};
use super::{build_qubit_optimal_povm, qubit_optimal_coefficients, DenseOperator, DensePovm, StateVector};
use crate::error::Result;
use crate::scalar::{creal, czero, lit, Real};
use crate::strategies::Priors;

#[derive(Debug, Clone)]
pub struct EquatorialAnalysis<T: Real> {
    pub omega1: DenseOperator<T>,
    pub omega2: DenseOperator<T>,
    /// `|a_j⟩ = |j⟩_B ⊗ |ψ⁻⟩_AC`, annihilated by `Ω₂`.
    pub kernel_a: [StateVector<T>; 2],
    /// `|b_j⟩ = |j⟩_C ⊗ |ψ⁻⟩_AB`, annihilated by `Ω₁`.
    pub kernel_b: [StateVector<T>; 2],
    /// `max_j max(‖Ω₂ a_j‖, ‖Ω₁ b_j‖)`.
    pub kernel_residual: T,
    pub povm: DensePovm<T>,
    /// Largest entry difference from the universal qubit optimum.
    pub universal_diff: T,
    /// `max(Tr[E₁Ω₂], Tr[E₂Ω₁])`.
    pub no_error_residual: T,
    /// `η₁ Tr[E₁Ω₁] + η₂ Tr[E₂Ω₂]`.
    pub mean_probability: T,
    /// Same quantity from the kernel coefficients, `(η₁/8)Σα_jj + (η₂/8)Σβ_jj`.
    pub mean_probability_coefficients: T,
}

impl<T: Real> EquatorialAnalysis<T> {
    pub fn matches_universal(&self, tol: T) -> bool {
        self.universal_diff <= tol
    }
}

/// Two-qubit operator `|00⟩⟨00| + |11⟩⟨11| + 2|ψ⁺⟩⟨ψ⁺|`.
fn pair_average<T: Real>() -> DenseOperator<T> {
    let one = creal(T::one());
    DenseOperator::from_fn(4, |r, c| match (r, c) {
        (0, 0) | (3, 3) | (1, 1) | (2, 2) | (1, 2) | (2, 1) => one,
        _ => czero(),
    })
}

fn singlet_amplitude<T: Real>(x: usize, y: usize) -> T {
    let h = lit::<T>(0.5).sqrt();
    match (x, y) {
        (0, 1) => h,
        (1, 0) => -h,
        _ => T::zero(),
    }
}

/// `|j⟩_spectator ⊗ |ψ⁻⟩_{A,partner}` on three qubits.
fn kernel_vector<T: Real>(spectator: usize, j: usize) -> StateVector<T> {
    let mut v = DVector::from_element(8, czero());
    for x in 0..2 {
        for y in 0..2 {
            let mut digits = [0; 3];
            digits[SYS_A] = x;
            digits[spectator] = j;
            digits[3 - SYS_A - spectator] = y;
            v[index3(digits, 2)] = creal(singlet_amplitude(x, y));
        }
    }
    v
}

/// Equal-prior analysis.
pub fn equatorial_analysis<T: Real>() -> Result<EquatorialAnalysis<T>> {
    equatorial_analysis_at(Priors::equal())
}

pub fn equatorial_analysis_at<T: Real>(priors: Priors<T>) -> Result<EquatorialAnalysis<T>> {
    let eighth = lit::<T>(0.125);
    let m = pair_average::<T>();
    let omega1 = embed_pair(&m, 2, SYS_A, SYS_B)?.scale(eighth);
    let omega2 = embed_pair(&m, 2, SYS_A, SYS_C)?.scale(eighth);

    let kernel_a = [kernel_vector::<T>(SYS_B, 0), kernel_vector::<T>(SYS_B, 1)];
    let kernel_b = [kernel_vector::<T>(SYS_C, 0), kernel_vector::<T>(SYS_C, 1)];
    let kernel_residual = kernel_a
        .iter()
        .map(|a| omega2.apply(a).norm())
        .chain(kernel_b.iter().map(|b| omega1.apply(b).norm()))
        .fold(T::zero(), |m, x| m.max(x));

    // The averaged objective restricted to the kernels is the universal qubit
    // one, so the optimal coefficients are diagonal with the qubit weights.
    let (_, c1, c2) = qubit_optimal_coefficients(priors);
    let alpha = [[c1, T::zero()], [T::zero(), c1]];
    let beta = [[c2, T::zero()], [T::zero(), c2]];
    let assemble = |vecs: &[StateVector<T>; 2], coef: [[T; 2]; 2]| {
        let mut acc = DenseOperator::zeros(8);
        for j in 0..2 {
            for k in 0..2 {
                let term = DenseOperator::from_matrix(&vecs[j] * vecs[k].adjoint()).expect("square");
                acc = acc.add(&term.scale(coef[j][k]));
            }
        }
        acc
    };
    let e1 = assemble(&kernel_a, alpha);
    let e2 = assemble(&kernel_b, beta);

    let no_error_residual = e1.mul(&omega2).trace().re.abs().max(e2.mul(&omega1).trace().re.abs());
    let mean_probability = priors.eta1 * e1.mul(&omega1).trace().re + priors.eta2 * e2.mul(&omega2).trace().re;
    let mean_probability_coefficients =
        priors.eta1 * eighth * (alpha[0][0] + alpha[1][1]) + priors.eta2 * eighth * (beta[0][0] + beta[1][1]);

    let povm = DensePovm::from_conclusive(e1, e2)?;
    let universal_diff = povm.max_abs_diff(&build_qubit_optimal_povm(priors)?)?;

    Ok(EquatorialAnalysis {
        omega1,
        omega2,
        kernel_a,
        kernel_b,
        kernel_residual,
        povm,
        universal_diff,
        no_error_residual,
        mean_probability,
        mean_probability_coefficients,
    })
}
