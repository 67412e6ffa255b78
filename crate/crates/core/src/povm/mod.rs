//! Finite-dimensional identification measurements on three qudits.
//!
//! The Hilbert space is `A ⊗ B ⊗ C` with `A` the unknown system and `B`, `C`
//! the references; basis index `a·d² + b·d + c`. Operators that act on a pair
//! of systems are lifted to the full space by explicit index bookkeeping in
//! [`tensor::embed_pair`].

pub mod blocks;
mod builders;
pub mod equatorial;
pub mod haar;
pub mod tensor;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::{cabs, cone, creal, czero, lit, Real};
use crate::strategies::Priors;

pub use blocks::{e0_block_eigenvalues, BlockEigenvalues};
pub use builders::{
    build_hayashi_povm, build_qubit_optimal_povm, build_sb_povm, mixing_strategy_povm, qubit_optimal_coefficients,
    QubitRegion,
};
pub use equatorial::{equatorial_analysis, equatorial_analysis_at, EquatorialAnalysis};
pub use haar::{haar_state, mc_mean_identification, no_error_check, McMean};
pub use tensor::{antisym_projector_pair, swap_operator};

/// Complex state vector.
pub type StateVector<T> = DVector<Complex<T>>;

/// Tolerance on `‖M − M†‖_max` for operators flagged Hermitian.
pub fn hermitian_tol<T: Real>() -> T {
    scaled_tol(1e-12)
}

/// Tolerance on `‖Σ E_i − 1‖_max`.
pub fn completeness_tol<T: Real>() -> T {
    scaled_tol(1e-10)
}

/// Default floor for the smallest eigenvalue of a POVM element.
pub fn positivity_tol<T: Real>() -> T {
    scaled_tol(1e-10)
}

// f64 tolerances are absolute; single precision gets a multiple of its epsilon.
fn scaled_tol<T: Real>(f64_tol: f64) -> T {
    let eps = <T as Real>::epsilon();
    if eps < lit(1e-10) {
        lit(f64_tol)
    } else {
        eps * lit(1e3)
    }
}

/// Square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn from_matrix(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape { expected: matrix.nrows(), got: matrix.ncols() });
        }
        Ok(Self { matrix })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self { matrix: DMatrix::from_fn(dim, dim, f) }
    }

    /// Real matrix promoted to complex.
    pub fn from_real(m: &DMatrix<T>) -> Result<Self> {
        Self::from_matrix(m.map(creal))
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim) }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &StateVector<T>) -> Self {
        Self { matrix: v * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }

    pub fn scale(&self, k: T) -> Self {
        Self { matrix: self.matrix.map(|z| z * k) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn apply(&self, v: &StateVector<T>) -> StateVector<T> {
        &self.matrix * v
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    /// `Re ⟨v|M|v⟩`.
    pub fn expectation(&self, v: &StateVector<T>) -> T {
        v.dotc(&(&self.matrix * v)).re
    }

    /// `max_ij |M_ij − N_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .fold(T::zero(), |m, (a, b)| m.max(cabs(*a - *b)))
    }

    pub fn max_abs(&self) -> T {
        self.matrix.iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_residual(&self) -> T {
        let n = self.dim();
        let mut r = T::zero();
        for i in 0..n {
            for j in i..n {
                r = r.max(cabs(self.matrix[(i, j)] - self.matrix[(j, i)].conj()));
            }
        }
        r
    }

    /// `‖M² − M‖_max`.
    pub fn projector_residual(&self) -> T {
        self.mul(self).max_abs_diff(self)
    }

    /// Eigenvalues of the Hermitian part, sorted descending.
    pub fn eigenvalues(&self) -> Vec<T> {
        let herm = (&self.matrix + self.matrix.adjoint()).map(|z| z * lit::<T>(0.5));
        let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().last().copied().unwrap_or_else(T::zero)
    }

    /// Numerical rank of a Hermitian operator.
    pub fn rank(&self, tol: T) -> usize {
        self.eigenvalues().iter().filter(|e| e.abs() > tol).count()
    }
}

/// A three-outcome identification measurement `{E₀, E₁, E₂}`, inconclusive
/// element first.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePovm<T: Real> {
    elements: Vec<DenseOperator<T>>,
    labels: Vec<String>,
}

impl<T: Real> DensePovm<T> {
    pub fn new(elements: Vec<DenseOperator<T>>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(domain("POVM without elements"));
        };
        let dim = first.dim();
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::Shape { expected: dim, got: bad.dim() });
        }
        if labels.len() != elements.len() {
            return Err(Error::Shape { expected: elements.len(), got: labels.len() });
        }
        Ok(Self { elements, labels })
    }

    /// `{1 − E₁ − E₂, E₁, E₂}`.
    pub fn from_conclusive(e1: DenseOperator<T>, e2: DenseOperator<T>) -> Result<Self> {
        let e0 = DenseOperator::identity(e1.dim()).sub(&e1).sub(&e2);
        Self::new(vec![e0, e1, e2], vec!["E0".into(), "E1".into(), "E2".into()])
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[DenseOperator<T>] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, k: usize) -> Result<&DenseOperator<T>> {
        self.elements.get(k).ok_or(Error::Shape { expected: self.elements.len(), got: k })
    }

    /// Replace one element (used to corrupt a POVM in sanity checks).
    pub fn with_element(mut self, k: usize, op: DenseOperator<T>) -> Result<Self> {
        if op.dim() != self.dim() || k >= self.elements.len() {
            return Err(Error::Shape { expected: self.dim(), got: op.dim() });
        }
        self.elements[k] = op;
        Ok(self)
    }

    /// `‖Σ E_i − 1‖_max`.
    pub fn completeness_residual(&self) -> T {
        let total = self.elements.iter().skip(1).fold(self.elements[0].clone(), |acc, e| acc.add(e));
        total.max_abs_diff(&DenseOperator::identity(self.dim()))
    }

    /// Largest entrywise difference between corresponding elements.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.elements.len() != other.elements.len() || self.dim() != other.dim() {
            return Err(Error::Shape { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .elements
            .iter()
            .zip(&other.elements)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(b))))
    }
}

/// Outcome of [`certify_povm`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct CertificationReport<T> {
    pub dim: usize,
    pub labels: Vec<String>,
    pub hermiticity_residuals: Vec<T>,
    pub completeness_residual: T,
    pub min_eigenvalues: Vec<T>,
    pub tolerance: T,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl<T: Real> CertificationReport<T> {
    pub fn min_eigenvalue(&self) -> T {
        self.min_eigenvalues.iter().copied().fold(T::max_value().unwrap_or(T::one()), |a, b| a.min(b))
    }
}

/// Check Hermiticity, completeness and positivity (`λ_min ≥ −tol`) of every
/// element. Never errors: problems are collected in the report.
pub fn certify_povm<T: Real>(povm: &DensePovm<T>, tol: T) -> CertificationReport<T> {
    let mut failures = Vec::new();
    let h_tol = hermitian_tol::<T>();
    let hermiticity_residuals: Vec<T> = povm.elements.iter().map(|e| e.hermiticity_residual()).collect();
    for (label, r) in povm.labels.iter().zip(&hermiticity_residuals) {
        if !(*r <= h_tol) {
            failures.push(format!("{label} not Hermitian (residual {r})"));
        }
    }
    let completeness_residual = povm.completeness_residual();
    if !(completeness_residual <= completeness_tol()) {
        failures.push(format!("elements sum to identity only up to {completeness_residual}"));
    }
    let min_eigenvalues: Vec<T> = povm.elements.iter().map(|e| e.min_eigenvalue()).collect();
    for (label, ev) in povm.labels.iter().zip(&min_eigenvalues) {
        if !(*ev >= -tol) {
            failures.push(format!("{label} has eigenvalue {ev}"));
        }
    }
    CertificationReport {
        dim: povm.dim(),
        labels: povm.labels.clone(),
        hermiticity_residuals,
        completeness_residual,
        min_eigenvalues,
        tolerance: tol,
        pass: failures.is_empty(),
        failures,
    }
}

/// Check that `v` has unit norm.
pub fn ensure_unit<T: Real>(v: &StateVector<T>) -> Result<()> {
    let n = v.norm();
    if !((n - T::one()).abs() <= hermitian_tol::<T>() * lit(10.0)) {
        return Err(domain(format!("state has norm {n}, expected 1")));
    }
    Ok(())
}

/// `v₁ ⊗ v₂ ⊗ …` with the first factor most significant.
pub fn kron<T: Real>(factors: &[&StateVector<T>]) -> StateVector<T> {
    factors.iter().fold(DVector::from_element(1, cone()), |acc, f| {
        let mut out = DVector::from_element(acc.len() * f.len(), czero());
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i * f.len() + j] = *a * *b;
            }
        }
        out
    })
}

/// Which of the two hypotheses a product state realises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    First,
    Second,
}

/// `|Ψ₁⟩ = |ψ₁⟩_A|ψ₁⟩_B|ψ₂⟩_C` or `|Ψ₂⟩ = |ψ₂⟩_A|ψ₁⟩_B|ψ₂⟩_C`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureProductState<T: Real> {
    pub psi1: StateVector<T>,
    pub psi2: StateVector<T>,
    pub which: Hypothesis,
}

impl<T: Real> PureProductState<T> {
    pub fn new(psi1: StateVector<T>, psi2: StateVector<T>, which: Hypothesis) -> Result<Self> {
        if psi1.len() != psi2.len() {
            return Err(Error::Shape { expected: psi1.len(), got: psi2.len() });
        }
        ensure_unit(&psi1)?;
        ensure_unit(&psi2)?;
        Ok(Self { psi1, psi2, which })
    }

    pub fn local_dim(&self) -> usize {
        self.psi1.len()
    }

    pub fn vector(&self) -> StateVector<T> {
        let unknown = match self.which {
            Hypothesis::First => &self.psi1,
            Hypothesis::Second => &self.psi2,
        };
        kron(&[unknown, &self.psi1, &self.psi2])
    }
}

/// `η₁⟨Ψ₁|E₁|Ψ₁⟩ + η₂⟨Ψ₂|E₂|Ψ₂⟩` for references `ψ₁`, `ψ₂`.
pub fn identification_prob<T: Real>(
    povm: &DensePovm<T>,
    psi1: &StateVector<T>,
    psi2: &StateVector<T>,
    priors: Priors<T>,
) -> Result<T> {
    let s1 = PureProductState::new(psi1.clone(), psi2.clone(), Hypothesis::First)?;
    let s2 = PureProductState { which: Hypothesis::Second, ..s1.clone() };
    let d = s1.local_dim();
    if povm.dim() != d * d * d {
        return Err(Error::Shape { expected: povm.dim(), got: d * d * d });
    }
    Ok(priors.eta1 * povm.element(1)?.expectation(&s1.vector())
        + priors.eta2 * povm.element(2)?.expectation(&s2.vector()))
}

/// Computational basis vector `|k⟩` in dimension `d`.
pub fn basis<T: Real>(d: usize, k: usize) -> StateVector<T> {
    let mut v = DVector::from_element(d, czero());
    v[k] = cone();
    v
}
