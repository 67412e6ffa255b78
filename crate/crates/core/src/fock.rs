//! Photon-number representation of the coherent-state comparator.
//!
//! Single-mode vectors live on `|0⟩..|n_max⟩`. Two-mode vectors and operators
//! use the box basis `|k, l⟩`, `0 ≤ k, l ≤ n_max`, at index
//! `k·(n_max+1) + l`. A total-photon sector `N` is *complete* when every
//! `|k, N−k⟩` lies in the box, i.e. `N ≤ n_max`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::ComplexAmplitude;
use crate::error::{Error, Result};
use crate::scalar::{cabs, cone, cplx, creal, czero, lit, to_f64, Real};

/// Coefficients over a truncated number basis plus the probability mass the
/// truncation discards.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Real> {
    pub n_max: usize,
    pub modes: usize,
    pub coeffs: DVector<Complex<T>>,
    /// `1 − Σ|c|²` of the untruncated state.
    pub tail_mass: T,
}

impl<T: Real> FockVector<T> {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::Shape { expected: self.dim(), got: other.dim() });
        }
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    /// `|self⟩ ⊗ |other⟩` for two single-mode vectors on the same cutoff.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.modes != 1 || other.modes != 1 || self.n_max != other.n_max {
            return Err(Error::Shape { expected: self.dim(), got: other.dim() });
        }
        let n = self.n_max + 1;
        let coeffs = DVector::from_fn(n * n, |idx, _| self.coeffs[idx / n] * other.coeffs[idx % n]);
        let kept = (T::one() - self.tail_mass) * (T::one() - other.tail_mass);
        Ok(Self { n_max: self.n_max, modes: 2, coeffs, tail_mass: T::one() - kept })
    }

    /// Coefficient of `|k, l⟩` (two modes) or `|k⟩` (one mode, `l` ignored).
    pub fn get(&self, k: usize, l: usize) -> Complex<T> {
        match self.modes {
            1 => self.coeffs[k],
            _ => self.coeffs[k * (self.n_max + 1) + l],
        }
    }
}

/// Square matrix over the one- or two-mode truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T: Real> {
    pub n_max: usize,
    pub modes: usize,
    pub matrix: DMatrix<Complex<T>>,
}

impl<T: Real> FockOperator<T> {
    pub fn zeros2(n_max: usize) -> Self {
        let d = (n_max + 1) * (n_max + 1);
        Self { n_max, modes: 2, matrix: DMatrix::zeros(d, d) }
    }

    pub fn identity2(n_max: usize) -> Self {
        let d = (n_max + 1) * (n_max + 1);
        Self { n_max, modes: 2, matrix: DMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), n_max: self.n_max, modes: self.modes }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix, n_max: self.n_max, modes: self.modes }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix, n_max: self.n_max, modes: self.modes }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix, n_max: self.n_max, modes: self.modes }
    }

    pub fn scale(&self, k: T) -> Self {
        Self { matrix: self.matrix.map(|z| z * k), n_max: self.n_max, modes: self.modes }
    }

    pub fn apply(&self, v: &FockVector<T>) -> Result<FockVector<T>> {
        if v.dim() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), got: v.dim() });
        }
        Ok(FockVector { coeffs: &self.matrix * &v.coeffs, ..v.clone() })
    }

    /// `Re ⟨v|M|v⟩`.
    pub fn expectation(&self, v: &FockVector<T>) -> Result<T> {
        Ok(v.inner(&self.apply(v)?)?.re)
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.iter().zip(other.matrix.iter()).fold(T::zero(), |m, (a, b)| m.max(cabs(*a - *b)))
    }

    pub fn hermiticity_residual(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn projector_residual(&self) -> T {
        self.mul(self).max_abs_diff(self)
    }

    /// Largest entry coupling different total photon numbers.
    pub fn sector_leakage(&self) -> T {
        let n = self.n_max + 1;
        let total = |i: usize| if self.modes == 1 { i } else { i / n + i % n };
        let mut r = T::zero();
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                if total(i) != total(j) {
                    r = r.max(cabs(self.matrix[(i, j)]));
                }
            }
        }
        r
    }

    /// Largest entry difference restricted to complete sectors `N ≤ n_max`.
    pub fn interior_max_abs_diff(&self, other: &Self) -> T {
        let idx = interior_indices(self.n_max);
        let mut r = T::zero();
        for &i in &idx {
            for &j in &idx {
                r = r.max(cabs(self.matrix[(i, j)] - other.matrix[(i, j)]));
            }
        }
        r
    }
}

/// Box indices whose total photon number is at most `n_max`.
pub fn interior_indices(n_max: usize) -> Vec<usize> {
    let n = n_max + 1;
    (0..n * n).filter(|i| i / n + i % n <= n_max).collect()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Exact in `f64` while the result stays below 2^53.
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_{k>n_max} e^{−λ} λ^k / k!`, summed directly.
fn poisson_tail(lambda: f64, n_max: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut k = n_max + 1;
    let mut term = (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp();
    let mut sum = 0.0;
    loop {
        sum += term;
        k += 1;
        term *= lambda / k as f64;
        if (k as f64 > lambda && term <= sum * f64::EPSILON * 1e-3) || term == 0.0 {
            return sum;
        }
    }
}

/// `e^{−|α|²/2} αᵏ/√k!` for `k ≤ n_max`; not renormalised.
pub fn coherent_fock<T: Real>(alpha: ComplexAmplitude<T>, n_max: usize) -> FockVector<T> {
    let a = alpha.value();
    let mut coeffs = DVector::from_element(n_max + 1, czero());
    let mut c = creal((-alpha.norm_sqr() * lit(0.5)).exp());
    coeffs[0] = c;
    for k in 1..=n_max {
        c = c * a / lit::<T>((k as f64).sqrt());
        coeffs[k] = c;
    }
    let tail_mass = lit(poisson_tail(to_f64(alpha.norm_sqr()), n_max));
    FockVector { n_max, modes: 1, coeffs, tail_mass }
}

/// `χ_N = 2^{−N/2} Σ_k √C(N,k) |k, N−k⟩`.
pub fn chi_vector<T: Real>(n: usize, n_max: usize) -> Result<FockVector<T>> {
    if n > n_max {
        return Err(Error::Cutoff { n, n_max });
    }
    let dim = n_max + 1;
    let mut coeffs = DVector::from_element(dim * dim, czero());
    for k in 0..=n {
        let w = (binomial(n, k) / 2f64.powi(n as i32)).sqrt();
        coeffs[k * dim + (n - k)] = creal(lit(w));
    }
    Ok(FockVector { n_max, modes: 2, coeffs, tail_mass: T::zero() })
}

fn chi_projector_sum<T: Real>(n_max: usize) -> FockOperator<T> {
    let mut op = FockOperator::zeros2(n_max);
    for n in 0..=n_max {
        let chi = chi_vector::<T>(n, n_max).expect("n within cutoff");
        op.matrix += &chi.coeffs * chi.coeffs.adjoint();
    }
    op
}

/// `Δ = (π/2) Σ_{N ≤ n_max} |χ_N⟩⟨χ_N|`.
pub fn delta_operator<T: Real>(n_max: usize) -> FockOperator<T> {
    chi_projector_sum::<T>(n_max).scale(T::frac_pi_2())
}

/// Two-mode beamsplitter unitary restricted to the box, built sector by
/// sector from `U a† U† = t a† − r b†`, `U b† U† = r a† + t b†`. On coherent
/// inputs it reproduces the amplitude map of
/// [`crate::coherent::BeamsplitterOp::mix`]. Columns from incomplete sectors
/// are truncated.
pub fn beamsplitter_fock<T: Real>(transmittivity: T, n_max: usize) -> Result<FockOperator<T>> {
    if !(transmittivity >= T::zero() && transmittivity <= T::one()) {
        return Err(Error::Domain(format!("transmittivity {transmittivity} outside [0, 1]")));
    }
    let t = transmittivity.sqrt();
    let r = (T::one() - transmittivity).sqrt();
    let dim = n_max + 1;
    let columns: Vec<(usize, Vec<(usize, Complex<T>)>)> = (0..dim * dim)
        .into_par_iter()
        .map(|col| {
            let (m, n) = (col / dim, col % dim);
            let total = m + n;
            let mut entries = Vec::new();
            for p in 0..=total {
                let q = total - p;
                if p > n_max || q > n_max {
                    continue;
                }
                let norm = (factorial(p) / factorial(m) * factorial(q) / factorial(n)).sqrt();
                let mut acc = T::zero();
                let lo = p.saturating_sub(n);
                for i in lo..=p.min(m) {
                    let j = p - i;
                    let mag: T = lit(binomial(m, i) * binomial(n, j) * norm);
                    let sign = if (m - i) % 2 == 1 { -T::one() } else { T::one() };
                    let powers = t.powi((i + n - j) as i32) * r.powi((m - i + j) as i32);
                    acc += sign * mag * powers;
                }
                entries.push((p * dim + q, creal(acc)));
            }
            (col, entries)
        })
        .collect();
    let mut op = FockOperator::zeros2(n_max);
    for (col, entries) in columns {
        for (row, v) in entries {
            op.matrix[(row, col)] = v;
        }
    }
    Ok(op)
}

/// `‖U†U − 1‖_max` over the complete sectors.
pub fn unitarity_residual<T: Real>(u: &FockOperator<T>) -> T {
    u.adjoint().mul(u).interior_max_abs_diff(&FockOperator::identity2(u.n_max))
}

/// Optimal comparator `{Π₀, Π₁}` with `Π₀ = Σ_{N ≤ n_max} |χ_N⟩⟨χ_N|`
/// ("same") and `Π₁ = 1 − Π₀` ("different").
pub fn comparator_povm_opt<T: Real>(n_max: usize) -> (FockOperator<T>, FockOperator<T>) {
    let pi0 = chi_projector_sum::<T>(n_max);
    let pi1 = FockOperator::identity2(n_max).sub(&pi0);
    (pi0, pi1)
}

/// `Π₀^bs = U†(1 ⊗ |0⟩⟨0|)U` for the balanced beamsplitter.
pub fn comparator_povm_bs<T: Real>(n_max: usize) -> Result<FockOperator<T>> {
    comparator_povm_bs_at(lit(0.5), n_max)
}

/// [`comparator_povm_bs`] with an arbitrary transmittivity.
pub fn comparator_povm_bs_at<T: Real>(transmittivity: T, n_max: usize) -> Result<FockOperator<T>> {
    let u = beamsplitter_fock(transmittivity, n_max)?;
    let dim = n_max + 1;
    let vacuum_rows: Vec<usize> = (0..dim).map(|x| x * dim).collect();
    let mut out = FockOperator::zeros2(n_max);
    for i in 0..dim * dim {
        for j in 0..dim * dim {
            let mut acc = czero();
            for &k in &vacuum_rows {
                acc += u.matrix[(k, i)].conj() * u.matrix[(k, j)];
            }
            out.matrix[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// `‖Π₀^bs − Π₀^opt‖_max` over the complete sectors.
pub fn verify_bs_equals_opt<T: Real>(n_max: usize) -> Result<T> {
    verify_bs_equals_opt_at(lit(0.5), n_max)
}

pub fn verify_bs_equals_opt_at<T: Real>(transmittivity: T, n_max: usize) -> Result<T> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let bs = comparator_povm_bs_at(transmittivity, n_max)?;
    let (opt, _) = comparator_povm_opt::<T>(n_max);
    Ok(bs.interior_max_abs_diff(&opt))
}

/// Grid for the brute-force evaluation of `∫ |α⟩|α⟩⟨α|⟨α| d²α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureGrid {
    pub r_max: f64,
    /// Simpson intervals in `r` (even).
    pub r_intervals: usize,
    /// Trapezoid nodes in `φ`.
    pub phi_nodes: usize,
    /// Largest photon number per mode included.
    pub photons: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { r_max: 6.0, r_intervals: 400, phi_nodes: 256, photons: 5 }
    }
}

/// Polar-grid quadrature of `Δ` on the box with cutoff `grid.photons`.
pub fn delta_by_quadrature<T: Real>(grid: QuadratureGrid) -> Result<FockOperator<T>> {
    if grid.r_intervals == 0 || grid.r_intervals % 2 == 1 || grid.phi_nodes == 0 {
        return Err(Error::Domain("Simpson needs an even, positive interval count".into()));
    }
    let n_max = grid.photons;
    let dim = n_max + 1;
    let h = grid.r_max / grid.r_intervals as f64;
    let dphi = std::f64::consts::TAU / grid.phi_nodes as f64;
    let partial: Vec<DMatrix<Complex<f64>>> = (0..=grid.r_intervals)
        .into_par_iter()
        .map(|ir| {
            let r = ir as f64 * h;
            let simpson = if ir == 0 || ir == grid.r_intervals {
                1.0
            } else if ir % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let weight = simpson * h / 3.0 * r * dphi;
            let mut acc = DMatrix::<Complex<f64>>::zeros(dim * dim, dim * dim);
            if weight == 0.0 {
                return acc;
            }
            for ip in 0..grid.phi_nodes {
                let alpha = ComplexAmplitude::from_polar(r, ip as f64 * dphi);
                let single = coherent_fock(alpha, n_max);
                let pair = single.tensor(&single).expect("same cutoff");
                acc.gerc(
                    Complex::new(weight, 0.0),
                    &pair.coeffs,
                    &pair.coeffs,
                    Complex::new(1.0, 0.0),
                );
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(DMatrix::zeros(dim * dim, dim * dim), |a, b| a + b);
    Ok(FockOperator { n_max, modes: 2, matrix: total.map(|z| cplx(lit(z.re), lit(z.im))) })
}

/// Largest entry difference between the quadrature and the closed form of
/// `Δ` on the `grid.photons` box.
pub fn delta_quadrature_deviation<T: Real>(grid: QuadratureGrid) -> Result<T> {
    let quad = delta_by_quadrature::<T>(grid)?;
    // The box with `photons` per mode reaches total photon number
    // `2·photons`, so the closed form is taken at that cutoff and cut down.
    let full = delta_operator::<T>(2 * grid.photons);
    let (small, big) = (grid.photons + 1, 2 * grid.photons + 1);
    let mut r = T::zero();
    for i in 0..small * small {
        for j in 0..small * small {
            let bi = (i / small) * big + i % small;
            let bj = (j / small) * big + j % small;
            r = r.max(cabs(quad.matrix[(i, j)] - full.matrix[(bi, bj)]));
        }
    }
    Ok(r)
}

/// Gram matrix `⟨χ_N|χ_M⟩` for `N, M ≤ n_max`, minus the identity, max norm.
pub fn chi_gram_residual<T: Real>(n_max: usize) -> T {
    let chis: Vec<FockVector<T>> = (0..=n_max).map(|n| chi_vector(n, n_max).expect("within cutoff")).collect();
    let mut r = T::zero();
    for (a, x) in chis.iter().enumerate() {
        for (b, y) in chis.iter().enumerate() {
            let target = if a == b { cone() } else { czero() };
            r = r.max(cabs(x.inner(y).expect("same shape") - target));
        }
    }
    r
}

/// `max_N ‖U†|N,0⟩ − χ_N‖_∞` for the balanced beamsplitter.
pub fn inverse_bs_chi_residual<T: Real>(n_max: usize) -> Result<T> {
    let u = beamsplitter_fock::<T>(lit(0.5), n_max)?;
    let dim = n_max + 1;
    let mut r = T::zero();
    for n in 0..=n_max {
        let chi = chi_vector::<T>(n, n_max)?;
        let row = n * dim;
        for i in 0..dim * dim {
            r = r.max(cabs(u.matrix[(row, i)].conj() - chi.coeffs[i]));
        }
    }
    Ok(r)
}

/// Smallest cutoff giving negligible tail for amplitudes up to `|α|`.
pub fn safe_cutoff(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 8.0 * alpha_abs + 20.0).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: f64, im: f64) -> ComplexAmplitude<f64> {
        ComplexAmplitude::new(re, im).unwrap()
    }

    #[test]
    fn coherent_vacuum_and_tail() {
        let v = coherent_fock(amp(0.0, 0.0), 5);
        assert_eq!(v.coeffs[0], Complex::new(1.0, 0.0));
        assert!(v.coeffs.iter().skip(1).all(|z| *z == Complex::new(0.0, 0.0)));
        assert_eq!(v.tail_mass, 0.0);
        let w = coherent_fock(amp(1.0, 0.0), 20);
        assert!(w.tail_mass <= 1e-18 && w.tail_mass >= 0.0, "{}", w.tail_mass);
        assert!((w.norm_sqr() + w.tail_mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_overlap_modulus() {
        let (a, b) = (amp(0.7, -0.2), amp(-0.3, 1.1));
        let n = safe_cutoff(1.2);
        let ov = coherent_fock(a, n).inner(&coherent_fock(b, n)).unwrap();
        let expected = (-(a - b).norm_sqr()).exp();
        assert!((ov.norm_sqr() - expected).abs() < 1e-12);
    }

    #[test]
    fn chi_small_cases() {
        let c0 = chi_vector::<f64>(0, 3).unwrap();
        assert_eq!(c0.get(0, 0), Complex::new(1.0, 0.0));
        let c1 = chi_vector::<f64>(1, 3).unwrap();
        let h = 0.5f64.sqrt();
        assert!((c1.get(0, 1).re - h).abs() < 1e-15 && (c1.get(1, 0).re - h).abs() < 1e-15);
        assert_eq!(chi_vector::<f64>(4, 3).unwrap_err(), Error::Cutoff { n: 4, n_max: 3 });
        assert!(chi_gram_residual::<f64>(20) <= 1e-14);
    }

    #[test]
    fn delta_projector_and_trace() {
        let d = delta_operator::<f64>(12);
        let p = d.scale(2.0 / std::f64::consts::PI);
        assert!(p.projector_residual() <= 1e-12);
        assert!((p.trace().re - 13.0).abs() < 1e-12);
        assert!(d.sector_leakage() == 0.0);
    }

    #[test]
    fn beamsplitter_basics() {
        let u = beamsplitter_fock::<f64>(1.0, 6).unwrap();
        assert!(u.max_abs_diff(&FockOperator::identity2(6)) < 1e-15);
        let u = beamsplitter_fock::<f64>(0.3, 10).unwrap();
        assert!(unitarity_residual(&u) < 1e-12);
        assert!(u.sector_leakage() <= 1e-14);
        assert!(inverse_bs_chi_residual::<f64>(20).unwrap() <= 1e-12);
        assert!(beamsplitter_fock::<f64>(1.5, 3).is_err());
    }

    #[test]
    fn beamsplitter_matches_coherent_map() {
        let (a, b) = (amp(0.8, 0.3), amp(-0.5, 0.6));
        let n = safe_cutoff(1.0);
        let input = coherent_fock(a, n).tensor(&coherent_fock(b, n)).unwrap();
        for t in [0.5, 0.2, 0.9] {
            let op = crate::coherent::BeamsplitterOp::new(0, 1, t).unwrap();
            let (a2, b2) = op.mix(a, b);
            let expected = coherent_fock(a2, n).tensor(&coherent_fock(b2, n)).unwrap();
            let out = beamsplitter_fock(t, n).unwrap().apply(&input).unwrap();
            let fid = expected.inner(&out).unwrap().norm_sqr();
            assert!(fid >= 1.0 - 10.0 * expected.tail_mass.max(input.tail_mass) - 1e-13, "T = {t}: {fid}");
        }
    }

    #[test]
    fn comparator_matches_balanced_beamsplitter() {
        assert!(verify_bs_equals_opt::<f64>(1).unwrap() <= 1e-14);
        assert!(verify_bs_equals_opt::<f64>(20).unwrap() <= 1e-11);
        assert!(verify_bs_equals_opt_at::<f64>(0.49, 20).unwrap() >= 1e-3);
        assert!(verify_bs_equals_opt::<f64>(0).is_err());
    }

    #[test]
    fn comparator_probabilities() {
        let n = safe_cutoff(2.0f64.sqrt());
        let (pi0, pi1) = comparator_povm_opt::<f64>(n);
        assert!(pi0.add(&pi1).max_abs_diff(&FockOperator::identity2(n)) == 0.0);
        assert!(pi0.mul(&pi1).max_abs_diff(&FockOperator::zeros2(n)) <= 1e-12);
        for a in [amp(0.0, 0.0), amp(1.0, 0.0), amp(1.0, 1.0)] {
            let s = coherent_fock(a, n).tensor(&coherent_fock(a, n)).unwrap();
            assert!(pi1.expectation(&s).unwrap() <= 1e-10);
        }
        let (a, b) = (amp(1.0, 0.0), amp(0.0, 1.0));
        let s = coherent_fock(a, n).tensor(&coherent_fock(b, n)).unwrap();
        let p = pi1.expectation(&s).unwrap();
        assert!((p - (1.0 - (-(a - b).norm_sqr() / 2.0).exp())).abs() <= 1e-8);
    }
}
