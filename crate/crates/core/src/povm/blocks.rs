//! Block structure of the swap-based inconclusive element `E₀`.
//!
//! `E₀` only couples basis states whose digit multisets agree, so it splits
//! into `1×1` blocks (`iii`), `3×3` blocks (permutations of `iij`) and, for
//! `d > 2`, `6×6` blocks (permutations of `ijk`).

use nalgebra::DMatrix;
use serde::Serialize;

use super::tensor::index3;
use super::DenseOperator;
use crate::error::{domain, Error, Result};
use crate::scalar::{cabs, lit, Real};

/// Closed-form spectrum of the `3×3` and `6×6` blocks, each list descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BlockEigenvalues<T> {
    pub c1: T,
    pub c2: T,
    pub lambda3: [T; 3],
    pub lambda6: [T; 6],
}

fn sort_desc<T: Real>(v: &mut [T]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
}

/// `3×3`: `{1, (2−c₁−c₂ ± r)/2}`; `6×6`: `{1, 1−c₁−c₂, (2−c₁−c₂ ± r)/2 twice}`,
/// with `r = √(c₁² − c₁c₂ + c₂²)`.
pub fn e0_block_eigenvalues<T: Real>(c1: T, c2: T) -> Result<BlockEigenvalues<T>> {
    if !(c1 >= T::zero() && c2 >= T::zero()) {
        return Err(domain(format!("weights must be nonnegative, got ({c1}, {c2})")));
    }
    let one = T::one();
    let two = one + one;
    let r = (c1 * c1 - c1 * c2 + c2 * c2).sqrt();
    let plus = (two - c1 - c2 + r) / two;
    let minus = (two - c1 - c2 - r) / two;
    let mut lambda3 = [one, plus, minus];
    let mut lambda6 = [one, one - c1 - c2, plus, plus, minus, minus];
    sort_desc(&mut lambda3);
    sort_desc(&mut lambda6);
    Ok(BlockEigenvalues { c1, c2, lambda3, lambda6 })
}

/// `Q₃` in the ordered basis `(iij, iji, jii)`.
pub fn q3_matrix<T: Real>(c1: T, c2: T) -> DMatrix<T> {
    let h = lit::<T>(0.5);
    let (a, b) = (c1 * h, c2 * h);
    let one = T::one();
    let z = T::zero();
    DMatrix::from_row_slice(3, 3, &[one - a, z, a, z, one - b, b, a, b, one - a - b])
}

/// `Q₆` in the ordered basis `(ijk, kji, jki, ikj, kij, jik)`.
pub fn q6_matrix<T: Real>(c1: T, c2: T) -> DMatrix<T> {
    let h = lit::<T>(0.5);
    let (a, b) = (c1 * h, c2 * h);
    let x = T::one() - a - b;
    let z = T::zero();
    #[rustfmt::skip]
    let rows = [
        x, a, z, z, z, b,
        a, x, b, z, z, z,
        z, b, x, a, z, z,
        z, z, a, x, b, z,
        z, z, z, b, x, a,
        b, z, z, z, a, x,
    ];
    DMatrix::from_row_slice(6, 6, &rows)
}

/// Basis triples `(iij, iji, jii)` labelling a `3×3` block.
pub fn q3_basis(i: usize, j: usize) -> [[usize; 3]; 3] {
    [[i, i, j], [i, j, i], [j, i, i]]
}

/// Basis triples `(ijk, kji, jki, ikj, kij, jik)` labelling a `6×6` block.
pub fn q6_basis(i: usize, j: usize, k: usize) -> [[usize; 3]; 6] {
    [[i, j, k], [k, j, i], [j, k, i], [i, k, j], [k, i, j], [j, i, k]]
}

/// Restriction of a three-qudit operator to the span of the given basis
/// states, in the given order.
pub fn extract_block<T: Real>(op: &DenseOperator<T>, d: usize, states: &[[usize; 3]]) -> Result<DenseOperator<T>> {
    if op.dim() != d * d * d {
        return Err(Error::Shape { expected: d * d * d, got: op.dim() });
    }
    if let Some(s) = states.iter().find(|s| s.iter().any(|&x| x >= d)) {
        return Err(domain(format!("basis state {s:?} outside local dimension {d}")));
    }
    let idx: Vec<usize> = states.iter().map(|s| index3(*s, d)).collect();
    Ok(DenseOperator::from_fn(idx.len(), |r, c| op.entry(idx[r], idx[c])))
}

/// Largest magnitude of any entry of `op` that couples the given block to the
/// rest of the space (zero when the block is invariant).
pub fn block_leakage<T: Real>(op: &DenseOperator<T>, d: usize, states: &[[usize; 3]]) -> T {
    let idx: Vec<usize> = states.iter().map(|s| index3(*s, d)).collect();
    let mut leak = T::zero();
    for &r in &idx {
        for c in 0..op.dim() {
            if !idx.contains(&c) {
                leak = leak.max(cabs(op.entry(r, c))).max(cabs(op.entry(c, r)));
            }
        }
    }
    leak
}
