//! Certification battery producing machine-readable check records.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::fock::{
    beamsplitter_fock, chi_gram_residual, comparator_povm_opt, delta_operator, delta_quadrature_deviation,
    inverse_bs_chi_residual, unitarity_residual, verify_bs_equals_opt, FockOperator, QuadratureGrid,
};
use crate::povm::blocks::{e0_block_eigenvalues, extract_block, q3_basis, q3_matrix, q6_basis, q6_matrix};
use crate::povm::tensor::swap_operator;
use crate::povm::{
    antisym_projector_pair, build_hayashi_povm, build_qubit_optimal_povm, build_sb_povm, certify_povm,
    equatorial_analysis, haar_state, identification_prob, mixing_strategy_povm, no_error_check, DenseOperator,
};
use crate::rng::{stream, Domain};
use crate::strategies::Priors;

/// One finite-dimensional check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuditCheck {
    pub check: String,
    pub dim: usize,
    pub params: serde_json::Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl QuditCheck {
    fn new(check: &str, dim: usize, params: serde_json::Value, residual: f64, tolerance: f64) -> Self {
        Self { check: check.into(), dim, params, residual, tolerance, pass: residual <= tolerance }
    }
}

/// One truncated Fock-space check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockCheck {
    pub check: String,
    pub n_max: usize,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl FockCheck {
    fn new(check: &str, n_max: usize, deviation: f64, tolerance: f64) -> Self {
        Self { check: check.into(), n_max, deviation, tolerance, pass: deviation <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub qudit: bool,
    pub fock: bool,
    pub d: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Haar pairs for the no-error checks.
    pub samples: u64,
    /// Include the brute-force quadrature of `Δ`.
    pub quadrature: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { qudit: true, fock: true, d: 3, n_max: 20, seed: 1, samples: 500, quadrature: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tool: String,
    pub version: String,
    pub config: VerifyConfig,
    pub qudit: Vec<QuditCheck>,
    pub fock: Vec<FockCheck>,
    pub notes: Vec<String>,
    pub pass: bool,
}

fn neg_part(x: f64) -> f64 {
    (-x).max(0.0)
}

fn eig_desc(m: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Numeric spectra of `Q₃`/`Q₆` against the closed forms, over `n` random
/// weight pairs in `[0, 1]²`.
pub fn block_eigenvalue_residual(n: u64, seed: u64) -> Result<f64> {
    let mut r: f64 = 0.0;
    for i in 0..n {
        let mut rng = stream(seed, Domain::Params, i);
        let (c1, c2): (f64, f64) = (rng.random(), rng.random());
        let closed = e0_block_eigenvalues(c1, c2)?;
        r = r.max(max_diff(&eig_desc(&q3_matrix(c1, c2)), &closed.lambda3));
        r = r.max(max_diff(&eig_desc(&q6_matrix(c1, c2)), &closed.lambda6));
    }
    Ok(r)
}

/// Largest difference between blocks cut out of the assembled `E₀` and the
/// printed `Q₃`/`Q₆` matrices.
pub fn block_assembly_residual(d: usize, c1: f64, c2: f64) -> Result<f64> {
    let povm = build_sb_povm(d, c1, c2)?;
    let e0 = povm.element(0)?;
    let q3 = DenseOperator::from_real(&q3_matrix(c1, c2))?;
    let q6 = DenseOperator::from_real(&q6_matrix(c1, c2))?;
    let mut r: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            r = r.max(extract_block(e0, d, &q3_basis(i, j))?.max_abs_diff(&q3));
            for k in 0..d {
                if k != i && k != j {
                    r = r.max(extract_block(e0, d, &q6_basis(i, j, k))?.max_abs_diff(&q6));
                }
            }
        }
    }
    Ok(r)
}

/// Count of `(c₁, c₂)` points on an `n×n` grid of `[0, 1]²` where swap-based
/// certification disagrees with `c₁ + c₂ ≤ 1`.
pub fn positivity_criterion_mismatches(d: usize, n: usize) -> Result<usize> {
    let mut mismatches = 0;
    for i in 0..n {
        for j in 0..n {
            let c1 = i as f64 / (n - 1) as f64;
            let c2 = j as f64 / (n - 1) as f64;
            let pass = certify_povm(&build_sb_povm(d, c1, c2)?, 1e-10).pass;
            if pass != (c1 + c2 <= 1.0 + 1e-10) {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

/// `max |P − (1/3)(1 − |⟨ψ₁|ψ₂⟩|²)|` over `n` Haar pairs for the optimal
/// equal-prior measurement.
pub fn hayashi_law_residual(d: usize, n: u64, seed: u64) -> Result<f64> {
    let povm = build_hayashi_povm::<f64>(d)?;
    let mut r: f64 = 0.0;
    for i in 0..n {
        let a = haar_state::<f64>(d, seed, 2 * i)?;
        let b = haar_state::<f64>(d, seed, 2 * i + 1)?;
        let p = identification_prob(&povm, &a, &b, Priors::equal())?;
        r = r.max((p - (1.0 - a.dotc(&b).norm_sqr()) / 3.0).abs());
    }
    Ok(r)
}

/// Finite-dimensional certification for local dimension `d`.
pub fn qudit_battery(d: usize, seed: u64, samples: u64) -> Result<Vec<QuditCheck>> {
    let mut out = Vec::new();
    let dim = d * d * d;
    let half = json!({"c1": 0.5, "c2": 0.5});

    let swap = swap_operator::<f64>(d)?;
    out.push(QuditCheck::new(
        "swap_involution",
        d * d,
        json!({}),
        swap.mul(&swap).max_abs_diff(&DenseOperator::identity(d * d)),
        1e-12,
    ));
    let asym = antisym_projector_pair::<f64>(d)?;
    out.push(QuditCheck::new("antisym_projector", d * d, json!({}), asym.projector_residual(), 1e-10));
    let rank_gap = (asym.rank(1e-8) as f64 - (d * (d - 1) / 2) as f64).abs();
    out.push(QuditCheck::new("antisym_rank", d * d, json!({"expected": d * (d - 1) / 2}), rank_gap, 0.0));

    let sb = build_sb_povm::<f64>(d, 0.5, 0.5)?;
    let cert = certify_povm(&sb, 1e-10);
    out.push(QuditCheck::new("sb_completeness", dim, half.clone(), cert.completeness_residual, 1e-10));
    out.push(QuditCheck::new("sb_positivity", dim, half.clone(), neg_part(cert.min_eigenvalue()), 1e-10));
    out.push(QuditCheck::new("sb_no_error", dim, json!({"samples": samples}), no_error_check(&sb, samples, seed)?, 1e-10));
    out.push(QuditCheck::new(
        "sb_block_eigenvalues",
        dim,
        json!({"pairs": 50}),
        block_eigenvalue_residual(50, seed)?,
        1e-12,
    ));
    out.push(QuditCheck::new(
        "sb_block_assembly",
        dim,
        json!({"c1": 0.3, "c2": 0.6}),
        block_assembly_residual(d, 0.3, 0.6)?,
        1e-12,
    ));
    if d >= 3 {
        out.push(QuditCheck::new(
            "sb_positivity_criterion",
            dim,
            json!({"grid": "21x21"}),
            positivity_criterion_mismatches(d, 21)? as f64,
            0.0,
        ));
    }

    let hay = build_hayashi_povm::<f64>(d)?;
    let cert = certify_povm(&hay, 1e-10);
    out.push(QuditCheck::new("hayashi_completeness", dim, json!({}), cert.completeness_residual, 1e-10));
    out.push(QuditCheck::new("hayashi_positivity", dim, json!({}), neg_part(cert.min_eigenvalue()), 1e-10));
    out.push(QuditCheck::new(
        "hayashi_no_error",
        dim,
        json!({"samples": samples}),
        no_error_check(&hay, samples, seed)?,
        1e-10,
    ));
    out.push(QuditCheck::new(
        "hayashi_probability_law",
        dim,
        json!({"pairs": 200}),
        hayashi_law_residual(d, 200, seed)?,
        1e-10,
    ));

    let mix = mixing_strategy_povm(0.5, &asym)?;
    out.push(QuditCheck::new("mixing_equals_sb", dim, json!({"q": 0.5}), mix.max_abs_diff(&sb)?, 1e-12));

    if d == 2 {
        let qubit = build_qubit_optimal_povm::<f64>(Priors::equal())?;
        out.push(QuditCheck::new("hayashi_equals_qubit_optimal", dim, json!({"eta1": 0.5}), hay.max_abs_diff(&qubit)?, 1e-10));
    }
    let eq = equatorial_analysis::<f64>()?;
    out.push(QuditCheck::new("equatorial_kernel", 8, json!({}), eq.kernel_residual, 1e-12));
    out.push(QuditCheck::new("equatorial_equals_universal", 8, json!({"eta1": 0.5}), eq.universal_diff, 1e-10));
    out.push(QuditCheck::new(
        "equatorial_mean",
        8,
        json!({"expected": 1.0 / 6.0}),
        (eq.mean_probability - 1.0 / 6.0).abs(),
        1e-12,
    ));
    for eta in [0.1, 0.2, 0.5, 0.8, 0.9] {
        let povm = build_qubit_optimal_povm::<f64>(Priors::new(eta)?)?;
        let cert = certify_povm(&povm, 1e-10);
        let residual = if cert.pass { neg_part(cert.min_eigenvalue()) } else { f64::INFINITY };
        out.push(QuditCheck::new("qubit_optimal_certified", 8, json!({"eta1": eta}), residual, 1e-10));
    }
    Ok(out)
}

fn projector_laws(pi0: &FockOperator<f64>, pi1: &FockOperator<f64>) -> f64 {
    let zero = FockOperator::zeros2(pi0.n_max);
    pi0.projector_residual()
        .max(pi0.hermiticity_residual())
        .max(pi0.mul(pi1).max_abs_diff(&zero))
}

/// Truncated Fock-space certification at cutoff `n_max`.
pub fn fock_battery(n_max: usize, quadrature: bool) -> Result<Vec<FockCheck>> {
    let mut out = Vec::new();
    out.push(FockCheck::new("chi_gram", n_max, chi_gram_residual::<f64>(n_max), 1e-14));
    let delta = delta_operator::<f64>(n_max);
    let p = delta.scale(2.0 / std::f64::consts::PI);
    out.push(FockCheck::new("delta_idempotent", n_max, p.projector_residual(), 1e-12));
    out.push(FockCheck::new("delta_trace", n_max, (p.trace().re - (n_max + 1) as f64).abs(), 1e-10));
    let u = beamsplitter_fock::<f64>(0.5, n_max)?;
    out.push(FockCheck::new("bs_sector_leakage", n_max, u.sector_leakage(), 1e-14));
    out.push(FockCheck::new("bs_unitarity", n_max, unitarity_residual(&u), 1e-12));
    out.push(FockCheck::new("bs_inverse_maps_to_chi", n_max, inverse_bs_chi_residual::<f64>(n_max)?, 1e-12));
    let (pi0, pi1) = comparator_povm_opt::<f64>(n_max);
    out.push(FockCheck::new("comparator_projector_laws", n_max, projector_laws(&pi0, &pi1), 1e-12));
    out.push(FockCheck::new("bs_equals_opt", n_max, verify_bs_equals_opt::<f64>(n_max)?, 1e-11));
    if quadrature {
        let grid = QuadratureGrid::default();
        out.push(FockCheck::new("delta_quadrature", grid.photons, delta_quadrature_deviation::<f64>(grid)?, 1e-6));
    }
    Ok(out)
}

/// Run the enabled batteries.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let qudit = if config.qudit { qudit_battery(config.d, config.seed, config.samples)? } else { Vec::new() };
    let fock = if config.fock { fock_battery(config.n_max, config.quadrature)? } else { Vec::new() };
    let mut notes = Vec::new();
    if config.fock {
        notes.push(format!(
            "bs_equals_opt compares total-photon sectors N <= {} only; higher sectors are cut by the box truncation",
            config.n_max
        ));
    }
    let pass = qudit.iter().all(|c| c.pass) && fock.iter().all(|c| c.pass);
    Ok(VerifyReport {
        tool: "coherent-id".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        qudit,
        fock,
        notes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_battery_passes() {
        let checks = qudit_battery(2, 3, 100).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(checks.iter().any(|c| c.check == "hayashi_equals_qubit_optimal"));
    }

    #[test]
    fn small_fock_battery_passes() {
        for c in fock_battery(6, false).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn positivity_criterion_at_d3() {
        assert_eq!(positivity_criterion_mismatches(3, 21).unwrap(), 0);
    }
}
