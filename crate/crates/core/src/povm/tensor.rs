//! Permutation operators on `(ℂ^d)^{⊗2}` and `(ℂ^d)^{⊗3}`.

use super::DenseOperator;
use crate::error::{domain, Error, Result};
use crate::scalar::{cone, creal, czero, lit, Real};

pub const SYS_A: usize = 0;
pub const SYS_B: usize = 1;
pub const SYS_C: usize = 2;

/// All permutations of three slots with their signs.
pub const S3: [([usize; 3], i8); 6] = [
    ([0, 1, 2], 1),
    ([1, 0, 2], -1),
    ([2, 1, 0], -1),
    ([0, 2, 1], -1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
];

/// `(a, b, c)` digits of a three-qudit basis index.
pub fn digits3(idx: usize, d: usize) -> [usize; 3] {
    [idx / (d * d), (idx / d) % d, idx % d]
}

pub fn index3(digits: [usize; 3], d: usize) -> usize {
    digits[0] * d * d + digits[1] * d + digits[2]
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(domain(format!("local dimension {d} < 2")));
    }
    Ok(())
}

/// Two-qudit swap, `SWAP|i⟩|j⟩ = |j⟩|i⟩`.
pub fn swap_operator<T: Real>(d: usize) -> Result<DenseOperator<T>> {
    check_dim(d)?;
    Ok(DenseOperator::from_fn(d * d, |row, col| {
        let (i, j) = (col / d, col % d);
        if row == j * d + i { cone() } else { czero() }
    }))
}

/// Projector `(1 − SWAP)/2` onto the antisymmetric subspace of two qudits,
/// of rank `d(d−1)/2`.
pub fn antisym_projector_pair<T: Real>(d: usize) -> Result<DenseOperator<T>> {
    let swap = swap_operator::<T>(d)?;
    Ok(DenseOperator::identity(d * d).sub(&swap).scale(lit(0.5)))
}

/// Operator that moves the content of slot `i` to slot `perm[i]`.
pub fn permutation_operator<T: Real>(d: usize, perm: [usize; 3]) -> Result<DenseOperator<T>> {
    check_dim(d)?;
    let mut sorted = perm;
    sorted.sort_unstable();
    if sorted != [0, 1, 2] {
        return Err(domain(format!("{perm:?} is not a permutation of three slots")));
    }
    Ok(DenseOperator::from_fn(d * d * d, |row, col| {
        let x = digits3(col, d);
        let mut y = [0; 3];
        for i in 0..3 {
            y[perm[i]] = x[i];
        }
        if row == index3(y, d) { cone() } else { czero() }
    }))
}

/// Exchange of two of the three systems.
pub fn transposition<T: Real>(d: usize, p: usize, q: usize) -> Result<DenseOperator<T>> {
    if p == q || p > 2 || q > 2 {
        return Err(domain(format!("invalid system pair ({p}, {q})")));
    }
    let mut perm = [0, 1, 2];
    perm.swap(p, q);
    permutation_operator(d, perm)
}

/// Lift a two-qudit operator `X` to `X_{first,second} ⊗ 1_rest` on three
/// qudits. `first` labels the left tensor factor of `X`.
pub fn embed_pair<T: Real>(x: &DenseOperator<T>, d: usize, first: usize, second: usize) -> Result<DenseOperator<T>> {
    check_dim(d)?;
    if x.dim() != d * d {
        return Err(Error::Shape { expected: d * d, got: x.dim() });
    }
    if first == second || first > 2 || second > 2 {
        return Err(domain(format!("invalid system pair ({first}, {second})")));
    }
    let rest = 3 - first - second;
    Ok(DenseOperator::from_fn(d * d * d, |row, col| {
        let r = digits3(row, d);
        let c = digits3(col, d);
        if r[rest] != c[rest] {
            return czero();
        }
        x.entry(r[first] * d + r[second], c[first] * d + c[second])
    }))
}

/// Projector onto the totally symmetric subspace, `(1/6) Σ_σ P_σ`.
pub fn symmetrizer3<T: Real>(d: usize) -> Result<DenseOperator<T>> {
    signed_average(d, false)
}

/// Projector onto the totally antisymmetric subspace, `(1/6) Σ_σ sgn(σ) P_σ`.
pub fn antisymmetrizer3<T: Real>(d: usize) -> Result<DenseOperator<T>> {
    signed_average(d, true)
}

fn signed_average<T: Real>(d: usize, signed: bool) -> Result<DenseOperator<T>> {
    let mut acc = DenseOperator::zeros(d * d * d);
    for (perm, sign) in S3 {
        let p = permutation_operator::<T>(d, perm)?;
        let w: T = if signed && sign < 0 { -T::one() } else { T::one() };
        acc = acc.add(&p.scale(w));
    }
    Ok(acc.scale(lit(1.0 / 6.0)))
}

/// Real diagonal helper used by tests and builders.
pub fn diag<T: Real>(values: &[T]) -> DenseOperator<T> {
    DenseOperator::from_fn(values.len(), |i, j| if i == j { creal(values[i]) } else { czero() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_squares_to_identity() {
        for d in 2..5 {
            let s = swap_operator::<f64>(d).unwrap();
            assert_eq!(s.mul(&s), DenseOperator::identity(d * d));
        }
        assert!(swap_operator::<f64>(1).is_err());
    }

    #[test]
    fn antisymmetric_rank() {
        for d in 2..6 {
            let a = antisym_projector_pair::<f64>(d).unwrap();
            assert!(a.projector_residual() < 1e-15);
            assert_eq!(a.rank(1e-9), d * (d - 1) / 2);
            assert!((a.trace().re - (d * (d - 1) / 2) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_antisymmetric_projector_is_singlet() {
        let a = antisym_projector_pair::<f64>(2).unwrap();
        // |ψ⁻⟩ = (|01⟩ − |10⟩)/√2
        let expected = [[0.0, 0.0, 0.0, 0.0], [0.0, 0.5, -0.5, 0.0], [0.0, -0.5, 0.5, 0.0], [0.0, 0.0, 0.0, 0.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert!((a.entry(i, j).re - expected[i][j]).abs() < 1e-15);
                assert_eq!(a.entry(i, j).im, 0.0);
            }
        }
    }

    #[test]
    fn embedding_matches_full_transposition() {
        for d in [2, 3] {
            let a = antisym_projector_pair::<f64>(d).unwrap();
            let one = DenseOperator::identity(d * d * d);
            for (p, q) in [(SYS_A, SYS_B), (SYS_A, SYS_C), (SYS_B, SYS_C)] {
                let lifted = embed_pair(&a, d, p, q).unwrap();
                let direct = one.sub(&transposition(d, p, q).unwrap()).scale(0.5);
                assert!(lifted.max_abs_diff(&direct) < 1e-15);
            }
        }
    }

    #[test]
    fn three_system_projectors() {
        for d in 2..5 {
            let s = symmetrizer3::<f64>(d).unwrap();
            let a = antisymmetrizer3::<f64>(d).unwrap();
            assert!(s.projector_residual() < 1e-13);
            assert!(a.projector_residual() < 1e-13);
            assert!(s.mul(&a).max_abs() < 1e-14);
            // dimensions of Sym³ and Λ³
            let sym = d * (d + 1) * (d + 2) / 6;
            let alt = d * (d - 1) * (d - 2) / 6;
            assert!((s.trace().re - sym as f64).abs() < 1e-12);
            assert!((a.trace().re - alt as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_permutations_rejected() {
        assert!(permutation_operator::<f64>(2, [0, 0, 1]).is_err());
        assert!(transposition::<f64>(2, 1, 1).is_err());
    }
}
