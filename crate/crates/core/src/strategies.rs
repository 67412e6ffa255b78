//! Success probability of every identification scheme for a pair of coherent
//! references, as a function of their separation `|α₁ − α₂|`.
//!
//! | label | scheme                                   | probability                  |
//! |-------|------------------------------------------|------------------------------|
//! | `sb`  | swap-based universal POVM                | `(1 − e^{−δ²})/4`            |
//! | `opt` | optimal universal POVM                   | `(1 − e^{−δ²})/3`            |
//! | `sbf` | comparator-projector POVM, `c₁=c₂=1/2`   | `(1 − e^{−δ²/2})/2`          |
//! | `bs`  | three-beamsplitter circuit, `T₁ = 1/2`   | `1 − e^{−δ²/3}`              |
//! | `idp` | optimal discrimination of *known* states | `1 − e^{−δ²/2}`              |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coherent::ComplexAmplitude;
use crate::error::{domain, Error, Result};
use crate::scalar::{lit, one_minus_exp_neg, Real};

/// Prior probabilities of the two hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Priors<T> {
    pub eta1: T,
    pub eta2: T,
}

impl<T: Real> Priors<T> {
    /// `η₁ = eta1`, `η₂ = 1 − eta1`.
    pub fn new(eta1: T) -> Result<Self> {
        if !(eta1 >= T::zero() && eta1 <= T::one()) {
            return Err(domain(format!("prior {eta1} outside [0, 1]")));
        }
        Ok(Self { eta1, eta2: T::one() - eta1 })
    }

    pub fn equal() -> Self {
        let h = lit(0.5);
        Self { eta1: h, eta2: h }
    }

    pub fn min(&self) -> T {
        self.eta1.min(self.eta2)
    }
}

/// Curve label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Sb,
    Opt,
    Sbf,
    Bs,
    Idp,
}

impl Strategy {
    /// Bottom-to-top order of the comparison figure.
    pub const ALL: [Strategy; 5] = [Strategy::Sb, Strategy::Opt, Strategy::Sbf, Strategy::Bs, Strategy::Idp];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Sb => "sb",
            Strategy::Opt => "opt",
            Strategy::Sbf => "sbf",
            Strategy::Bs => "bs",
            Strategy::Idp => "idp",
        }
    }

    /// Equal-prior success probability at separation `delta_abs`.
    pub fn probability<T: Real>(self, delta_abs: T) -> T {
        match self {
            Strategy::Sb => p_sb(delta_abs),
            Strategy::Opt => p_opt(delta_abs),
            Strategy::Sbf => p_sbf(delta_abs),
            Strategy::Bs => p_bs_equal_priors(delta_abs * delta_abs),
            Strategy::Idp => p_idp_known(delta_abs),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.label() == s)
            .ok_or_else(|| domain(format!("unknown strategy {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct CurvePoint<T> {
    pub delta_abs: T,
    pub strategy: Strategy,
    pub probability: T,
}

/// Swap-based universal measurement.
pub fn p_sb<T: Real>(delta_abs: T) -> T {
    one_minus_exp_neg(delta_abs * delta_abs) / lit(4.0)
}

/// Optimal universal measurement.
pub fn p_opt<T: Real>(delta_abs: T) -> T {
    one_minus_exp_neg(delta_abs * delta_abs) / lit(3.0)
}

/// Comparator-projector measurement at the positivity bound `c₁ + c₂ = 1`.
pub fn p_sbf<T: Real>(delta_abs: T) -> T {
    one_minus_exp_neg(delta_abs * delta_abs * lit(0.5)) * lit(0.5)
}

/// Optimal unambiguous discrimination of two *known* coherent states at equal
/// priors, `1 − |⟨α₁|α₂⟩|`.
pub fn p_idp_known<T: Real>(delta_abs: T) -> T {
    one_minus_exp_neg(delta_abs * delta_abs * lit(0.5))
}

fn p_bs_equal_priors<T: Real>(delta_sq: T) -> T {
    one_minus_exp_neg(delta_sq / lit(3.0))
}

/// Exponent factors `((1−T₁)/(2−T₁), T₁/(1+T₁))` of the two detectors.
fn bs_exponents<T: Real>(t1: T) -> (T, T) {
    let one = T::one();
    ((one - t1) / (one + one - t1), t1 / (one + t1))
}

/// Failure probability `1 − p_bs`, evaluated without cancellation.
fn bs_failure<T: Real>(delta_sq: T, t1: T, priors: Priors<T>) -> T {
    let (a, b) = bs_exponents(t1);
    priors.eta1 * (-a * delta_sq).exp() + priors.eta2 * (-b * delta_sq).exp()
}

/// Three-beamsplitter circuit success probability `η₁P₁ + η₂P₂`.
pub fn p_bs<T: Real>(
    alpha1: ComplexAmplitude<T>,
    alpha2: ComplexAmplitude<T>,
    t1: T,
    priors: Priors<T>,
) -> Result<T> {
    p_bs_delta_sq((alpha1 - alpha2).norm_sqr(), t1, priors)
}

/// [`p_bs`] parameterised by `|α₁ − α₂|²`.
pub fn p_bs_delta_sq<T: Real>(delta_sq: T, t1: T, priors: Priors<T>) -> Result<T> {
    if !(t1 > T::zero() && t1 < T::one()) {
        return Err(domain(format!("T1 = {t1} must lie strictly inside (0, 1)")));
    }
    p_bs_closure(delta_sq, t1, priors)
}

/// Continuous extension of [`p_bs_delta_sq`] to `T₁ ∈ [0, 1]`, for reading
/// off the value at a boundary optimum.
pub fn p_bs_closure<T: Real>(delta_sq: T, t1: T, priors: Priors<T>) -> Result<T> {
    if !(t1 >= T::zero() && t1 <= T::one()) {
        return Err(domain(format!("T1 = {t1} outside [0, 1]")));
    }
    let (a, b) = bs_exponents(t1);
    Ok(priors.eta1 * one_minus_exp_neg(a * delta_sq) + priors.eta2 * one_minus_exp_neg(b * delta_sq))
}

/// Residual of the equal-prior critical-point condition
/// `1 = (1+T₁)²/(2−T₁)² · e^{−δ²((1−T₁)/(2−T₁) − T₁/(1+T₁))}`.
pub fn critical_point_residual<T: Real>(delta_sq: T, t1: T) -> T {
    let one = T::one();
    let (a, b) = bs_exponents(t1);
    let ratio = (one + t1) / (one + one - t1);
    ratio * ratio * (-delta_sq * (a - b)).exp() - one
}

/// Transmittivity of the cloning splitter that maximises [`p_bs`].
///
/// A coarse scan over `[0, 1]` brackets the maximum, then golden-section
/// search refines it. The complementary failure probability is minimised
/// instead of maximising `p_bs`, which keeps full relative precision when
/// success is close to one. An optimum on the boundary is returned as the
/// boundary value itself.
pub fn optimize_t1<T: Real>(alpha1: ComplexAmplitude<T>, alpha2: ComplexAmplitude<T>, priors: Priors<T>) -> Result<T> {
    let delta_sq = (alpha1 - alpha2).norm_sqr();
    if delta_sq == T::zero() {
        return Err(Error::Degenerate("identical references: p_bs vanishes for every T1".into()));
    }
    let objective = |t: T| bs_failure(delta_sq, t, priors);

    const SCAN: usize = 1000;
    let step = T::one() / lit(SCAN as f64);
    let mut best = 0;
    let mut best_val = objective(T::zero());
    for i in 1..=SCAN {
        let v = objective(step * lit(i as f64));
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let mut lo = step * lit(best.saturating_sub(1) as f64);
    let mut hi = (step * lit((best + 1).min(SCAN) as f64)).min(T::one());

    let inv_phi: T = lit(0.618_033_988_749_894_8);
    let tol = lit::<T>(1e-10).max(<T as Real>::epsilon() * lit(16.0));
    let mut x1 = hi - (hi - lo) * inv_phi;
    let mut x2 = lo + (hi - lo) * inv_phi;
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) * inv_phi;
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) * inv_phi;
            f2 = objective(x2);
        }
    }
    let mid = (lo + hi) * lit(0.5);
    // boundary optimum: keep whichever endpoint is at least as good
    let candidates = [T::zero(), mid, T::one()];
    let mut arg = mid;
    let mut val = objective(mid);
    for c in candidates {
        let v = objective(c);
        if v < val {
            val = v;
            arg = c;
        }
    }
    Ok(arg)
}

/// Which pair of curves an ordering check compares (`lower ≤ upper`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    SbLeSbf,
    SbfLeBs,
    OptLeBs,
    BsLeIdp,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::SbLeSbf, Relation::SbfLeBs, Relation::OptLeBs, Relation::BsLeIdp];

    pub fn pair(self) -> (Strategy, Strategy) {
        match self {
            Relation::SbLeSbf => (Strategy::Sb, Strategy::Sbf),
            Relation::SbfLeBs => (Strategy::Sbf, Strategy::Bs),
            Relation::OptLeBs => (Strategy::Opt, Strategy::Bs),
            Relation::BsLeIdp => (Strategy::Bs, Strategy::Idp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct OrderingReport<T> {
    pub points: usize,
    /// Largest `lower − upper` over all relations and points; `≤ 0` when the
    /// ordering holds.
    pub max_violation: T,
    /// Points where `lower` exceeds `upper` by more than a few ulps.
    pub violations: usize,
    /// Relation and separation of the largest violation, if any.
    pub worst: Option<(Relation, T)>,
}

impl<T: Real> OrderingReport<T> {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Check `P_sb ≤ P_sbf ≤ P_bs ≤ P_idp` and `P_opt ≤ P_bs` at every grid point.
pub fn verify_ordering<T: Real>(grid: &[T]) -> Result<OrderingReport<T>> {
    if grid.is_empty() {
        return Err(domain("ordering grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|d| !(**d >= T::zero())) {
        return Err(domain(format!("negative or NaN separation {bad}")));
    }
    let slack = <T as Real>::epsilon() * lit(8.0);
    let mut report = OrderingReport { points: grid.len(), max_violation: T::min_value().unwrap_or(-T::one()), violations: 0, worst: None };
    for &delta in grid {
        for rel in Relation::ALL {
            let (lo, up) = rel.pair();
            let (pl, pu) = (lo.probability(delta), up.probability(delta));
            let excess = pl - pu;
            if excess > report.max_violation {
                report.max_violation = excess;
                if excess > T::zero() {
                    report.worst = Some((rel, delta));
                }
            }
            if excess > slack * pu {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}

/// Evaluate one strategy on a grid of separations.
pub fn curve<T: Real>(strategy: Strategy, grid: &[T]) -> Vec<CurvePoint<T>> {
    grid.iter()
        .map(|&delta_abs| CurvePoint { delta_abs, strategy, probability: strategy.probability(delta_abs) })
        .collect()
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace<T: Real>(min: T, max: T, steps: usize) -> Result<Vec<T>> {
    if steps < 2 {
        return Err(domain("a grid needs at least two points"));
    }
    if !(min.is_finite() && max.is_finite() && max >= min) {
        return Err(domain(format!("invalid grid bounds [{min}, {max}]")));
    }
    let span = max - min;
    let last = lit::<T>((steps - 1) as f64);
    Ok((0..steps)
        .map(|i| if i + 1 == steps { max } else { min + span * lit::<T>(i as f64) / last })
        .collect())
}

/// Universal qudit schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Universal {
    Sb,
    Opt,
}

/// Haar-averaged equal-prior success probability on qudits:
/// `(d−1)/(4d)` for the swap-based scheme, `(d−1)/(3d)` for the optimal one.
pub fn mean_p_universal<T: Real>(d: usize, strategy: Universal) -> Result<T> {
    if d < 2 {
        return Err(domain(format!("dimension {d} < 2")));
    }
    let d: T = lit(d as f64);
    let denom: T = match strategy {
        Universal::Sb => lit(4.0),
        Universal::Opt => lit(3.0),
    };
    Ok((d - T::one()) / (denom * d))
}
