use serde::Serialize;

use super::tensor::{antisym_projector_pair, antisymmetrizer3, embed_pair, symmetrizer3, SYS_A, SYS_B, SYS_C};
use super::{DenseOperator, DensePovm};
use crate::error::{domain, Error, Result};
use crate::scalar::{lit, Real};
use crate::strategies::Priors;

/// `(1_B ⊗ A_AC, 1_C ⊗ A_AB)`: the pairwise antisymmetric projectors that
/// exclude reference `C` (resp. `B`).
fn pair_projectors<T: Real>(d: usize) -> Result<(DenseOperator<T>, DenseOperator<T>)> {
    let asym = antisym_projector_pair::<T>(d)?;
    Ok((embed_pair(&asym, d, SYS_A, SYS_C)?, embed_pair(&asym, d, SYS_A, SYS_B)?))
}

/// Swap-based measurement `E₁ = c₁ 1_B⊗A_AC`, `E₂ = c₂ 1_C⊗A_AB`.
///
/// Positivity of `E₀` is not checked here; see [`super::certify_povm`].
pub fn build_sb_povm<T: Real>(d: usize, c1: T, c2: T) -> Result<DensePovm<T>> {
    if !(c1 >= T::zero() && c2 >= T::zero()) {
        return Err(domain(format!("weights must be nonnegative, got ({c1}, {c2})")));
    }
    let (ac, ab) = pair_projectors::<T>(d)?;
    DensePovm::from_conclusive(ac.scale(c1), ab.scale(c2))
}

/// Prior region of the optimal qubit measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QubitRegion {
    /// `η₁ < 1/5`: compare `A` with `B` only.
    CompareAbOnly,
    /// `1/5 ≤ η₁ ≤ 4/5`.
    Mixed,
    /// `η₁ > 4/5`: compare `A` with `C` only.
    CompareAcOnly,
}

/// Weights `(c₁, c₂)` of the optimal qubit measurement
/// `E₁ = c₁ 1_B⊗ψ⁻_AC`, `E₂ = c₂ 1_C⊗ψ⁻_AB`.
///
/// In the middle region `c₁ = λ = (2/3)(2 − √(η₂/η₁))` and
/// `c₂ = (4 − 4λ)/(4 − 3λ)`.
pub fn qubit_optimal_coefficients<T: Real>(priors: Priors<T>) -> (QubitRegion, T, T) {
    let eta = priors.eta1;
    if eta < lit(0.2) {
        (QubitRegion::CompareAbOnly, T::zero(), T::one())
    } else if eta > lit(0.8) {
        (QubitRegion::CompareAcOnly, T::one(), T::zero())
    } else {
        let lambda: T = lit::<T>(2.0 / 3.0) * (lit::<T>(2.0) - (priors.eta2 / priors.eta1).sqrt());
        let four: T = lit(4.0);
        let c2 = (four - four * lambda) / (four - lit::<T>(3.0) * lambda);
        (QubitRegion::Mixed, lambda, c2)
    }
}

/// Optimal universal measurement for qubits at arbitrary priors.
pub fn build_qubit_optimal_povm<T: Real>(priors: Priors<T>) -> Result<DensePovm<T>> {
    let (_, c1, c2) = qubit_optimal_coefficients(priors);
    build_sb_povm(2, c1, c2)
}

/// Optimal universal measurement at equal priors in any dimension.
///
/// `E₁ = e·(1_B⊗A_AC)`, `E₂ = e·(1_C⊗A_AB)` with
/// `e = (2/3)Γ_mixed + (1/2)Γ_AS`, where `Γ_AS` projects onto the totally
/// antisymmetric subspace of three qudits and `Γ_mixed = 1 − Γ_S − Γ_AS`.
pub fn build_hayashi_povm<T: Real>(d: usize) -> Result<DensePovm<T>> {
    let (ac, ab) = pair_projectors::<T>(d)?;
    let dim = d * d * d;
    let gamma_s = symmetrizer3::<T>(d)?;
    let gamma_as = antisymmetrizer3::<T>(d)?;
    let gamma_mixed = DenseOperator::identity(dim).sub(&gamma_s).sub(&gamma_as);
    let e = gamma_mixed.scale(lit(2.0 / 3.0)).add(&gamma_as.scale(lit(0.5)));
    DensePovm::from_conclusive(e.mul(&ac), e.mul(&ab))
}

/// Random switching between two comparators: with probability `q` compare
/// `A` with `C`, otherwise `A` with `B`.
///
/// `f_dif` is the comparator element on two qudits that certifies the states
/// differ.
pub fn mixing_strategy_povm<T: Real>(q: T, f_dif: &DenseOperator<T>) -> Result<DensePovm<T>> {
    if !(q >= T::zero() && q <= T::one()) {
        return Err(domain(format!("mixing weight {q} outside [0, 1]")));
    }
    let d = (f_dif.dim() as f64).sqrt().round() as usize;
    if d * d != f_dif.dim() {
        return Err(Error::Shape { expected: d * d, got: f_dif.dim() });
    }
    let e1 = embed_pair(f_dif, d, SYS_A, SYS_C)?.scale(q);
    let e2 = embed_pair(f_dif, d, SYS_A, SYS_B)?.scale(T::one() - q);
    DensePovm::from_conclusive(e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{basis, certify_povm, identification_prob};

    #[test]
    fn sb_positivity_examples() {
        let r = certify_povm(&build_sb_povm::<f64>(3, 0.5, 0.5).unwrap(), 1e-10);
        assert!(r.pass, "{:?}", r.failures);
        assert!(r.min_eigenvalues[0].abs() < 1e-12);

        let r = certify_povm(&build_sb_povm::<f64>(3, 0.6, 0.6).unwrap(), 1e-10);
        assert!(!r.pass);
        assert!((r.min_eigenvalues[0] + 0.2).abs() < 1e-10);

        // no 6×6 block exists for qubits
        let r = certify_povm(&build_sb_povm::<f64>(2, 0.6, 0.6).unwrap(), 1e-10);
        assert!(r.pass, "{:?}", r.failures);

        assert!(build_sb_povm::<f64>(2, -0.1, 0.5).is_err());
    }

    #[test]
    fn qubit_regions() {
        let (region, c1, c2) = qubit_optimal_coefficients(Priors::<f64>::equal());
        assert_eq!(region, QubitRegion::Mixed);
        assert!((c1 - 2.0 / 3.0).abs() < 1e-15 && (c2 - 2.0 / 3.0).abs() < 1e-15);

        let (region, c1, c2) = qubit_optimal_coefficients(Priors::new(0.1f64).unwrap());
        assert_eq!((region, c1, c2), (QubitRegion::CompareAbOnly, 0.0, 1.0));
        let povm = build_qubit_optimal_povm(Priors::new(0.1f64).unwrap()).unwrap();
        assert!(povm.element(1).unwrap().max_abs() == 0.0);
        assert!(povm.element(2).unwrap().projector_residual() < 1e-15);

        // continuity at both region boundaries
        let (_, c1, c2) = qubit_optimal_coefficients(Priors::new(0.2f64).unwrap());
        assert!(c1.abs() < 1e-15 && (c2 - 1.0).abs() < 1e-15);
        let (_, c1, c2) = qubit_optimal_coefficients(Priors::new(0.8f64).unwrap());
        assert!((c1 - 1.0).abs() < 1e-15 && c2.abs() < 1e-15);
    }

    #[test]
    fn qubit_optimal_positive_everywhere() {
        for k in 0..=20 {
            let povm = build_qubit_optimal_povm(Priors::new(k as f64 / 20.0).unwrap()).unwrap();
            let r = certify_povm(&povm, 1e-10);
            assert!(r.pass, "eta1 = {}: {:?}", k as f64 / 20.0, r.failures);
        }
    }

    #[test]
    fn hayashi_reduces_to_qubit_optimum() {
        let h = build_hayashi_povm::<f64>(2).unwrap();
        let q = build_qubit_optimal_povm(Priors::equal()).unwrap();
        assert!(h.max_abs_diff(&q).unwrap() < 1e-14);
        for d in [2, 3] {
            let r = certify_povm(&build_hayashi_povm::<f64>(d).unwrap(), 1e-10);
            assert!(r.pass, "d = {d}: {:?}", r.failures);
        }
    }

    #[test]
    fn mixing_reproduces_swap_based() {
        let asym = antisym_projector_pair::<f64>(3).unwrap();
        let mix = mixing_strategy_povm(0.5, &asym).unwrap();
        let sb = build_sb_povm(3, 0.5, 0.5).unwrap();
        assert!(mix.max_abs_diff(&sb).unwrap() < 1e-15);

        let only_ab = mixing_strategy_povm(0.0, &asym).unwrap();
        assert_eq!(only_ab.element(1).unwrap().max_abs(), 0.0);
        assert!(mixing_strategy_povm(1.5, &asym).is_err());
    }

    #[test]
    fn orthogonal_and_equal_references() {
        let (e0, e1) = (basis::<f64>(2, 0), basis::<f64>(2, 1));
        let h = build_hayashi_povm::<f64>(2).unwrap();
        let sb = build_sb_povm::<f64>(2, 0.5, 0.5).unwrap();
        assert!((identification_prob(&h, &e0, &e1, Priors::equal()).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((identification_prob(&sb, &e0, &e1, Priors::equal()).unwrap() - 0.25).abs() < 1e-15);
        assert!(identification_prob(&h, &e0, &e0, Priors::equal()).unwrap().abs() < 1e-15);
        assert!(identification_prob(&sb, &e1, &e1, Priors::equal()).unwrap().abs() < 1e-15);
    }
}
