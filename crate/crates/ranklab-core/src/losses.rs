//! Pairwise loss functions, additive ranking losses, permutation metrics,
//! and numeric probes for the loss-shape constants.
//!
//! A [`PairwiseLoss`] charges `l(θ_i, θ_j) ≥ 0` for ranking unit `i` above
//! unit `j`, and charges nothing when `θ_i ≥ θ_j` (the order was right).
//! [`additive_loss`] assembles the total over all ordered pairs under a
//! [`ScalingRule`]; [`footrule_loss`] and [`inversion_loss`] are the two
//! permutation metrics whose two-sided "sandwich" relation
//! `½·L ≤ R ≤ 2·L` is exposed via [`sandwich_check`].

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

// ======================================================================
// Rankings
// ======================================================================

/// A ranking of `p` units: a bijection from units to positions `0..p`,
/// position 0 claiming the largest believed latent value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    positions: Vec<usize>,
}

impl Ranking {
    /// Builds a ranking from per-unit positions (`positions[i]` = rank of
    /// unit `i`), validating that they form a permutation of `0..p`.
    pub fn from_positions(positions: Vec<usize>) -> Result<Self> {
        let p = positions.len();
        let mut seen = vec![false; p];
        for &pos in &positions {
            if pos >= p || seen[pos] {
                return Err(Error::Domain(format!(
                    "positions are not a permutation of 0..{p}"
                )));
            }
            seen[pos] = true;
        }
        Ok(Self { positions })
    }

    /// Builds a ranking from an order (`order[k]` = unit placed at
    /// position `k`).
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let p = order.len();
        let mut positions = vec![usize::MAX; p];
        for (k, &unit) in order.iter().enumerate() {
            if unit >= p || positions[unit] != usize::MAX {
                return Err(Error::Domain(format!(
                    "order is not a permutation of 0..{p}"
                )));
            }
            positions[unit] = k;
        }
        Ok(Self { positions })
    }

    /// The identity ranking (unit `i` at position `i`).
    pub fn identity(p: usize) -> Self {
        Self {
            positions: (0..p).collect(),
        }
    }

    /// Per-unit positions.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Units in rank order (inverse of [`Ranking::positions`]).
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0usize; self.positions.len()];
        for (unit, &pos) in self.positions.iter().enumerate() {
            order[pos] = unit;
        }
        order
    }

    /// Number of ranked units.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// True for the empty ranking.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// The ranking that sorts values in nonincreasing order, ties broken by
/// unit index (lower index ranks first). This is the reference ("true")
/// ranking all metrics compare against.
pub fn descending_ranking(values: &[f64]) -> Ranking {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps index order on ties
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    Ranking::from_order(&idx).expect("argsort yields a permutation")
}

// ======================================================================
// Pairwise losses
// ======================================================================

/// Reference CDF used by the percentile (PER) loss.
pub type RefCdf = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A pairwise loss `l(x, y)`: the price of ranking a unit with latent value
/// `x` above one with latent value `y`. All variants vanish when `x ≥ y`.
#[derive(Clone)]
pub enum PairwiseLoss {
    /// `(y − x)₊` — the gap itself.
    HingeDiff,
    /// `1{x < y}` — a flat unit charge per misranked pair.
    ZeroOne,
    /// `|F(y) − F(x)|` for `x < y` — the gap measured through a reference
    /// CDF, so only percentile differences matter.
    Per(RefCdf),
    /// `1` exactly when the pair straddles the threshold `θ₀` (the lower
    /// value on or below, the higher strictly above, or strictly below and
    /// on). Pairs on the same side are free.
    PValue { theta0: f64 },
}

impl std::fmt::Debug for PairwiseLoss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::HingeDiff => write!(f, "HingeDiff"),
            Self::ZeroOne => write!(f, "ZeroOne"),
            Self::Per(_) => write!(f, "Per(<ref cdf>)"),
            Self::PValue { theta0 } => write!(f, "PValue {{ theta0: {theta0} }}"),
        }
    }
}

impl PairwiseLoss {
    /// Percentile loss referenced to a proper prior's CDF.
    pub fn per_from_prior(prior: &crate::distributions::PriorSpec) -> Result<Self> {
        if !prior.is_proper() {
            return Err(Error::Domain(
                "percentile loss needs a proper reference distribution".into(),
            ));
        }
        let prior = prior.clone();
        Ok(Self::Per(Arc::new(move |v: f64| {
            prior
                .cdf(v)
                .expect("proper prior CDF evaluation should not fail")
        })))
    }

    /// Percentile loss referenced to the empirical CDF of a sample.
    pub fn per_empirical(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() || sample.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "empirical reference CDF needs a nonempty finite sample".into(),
            ));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len() as f64;
        Ok(Self::Per(Arc::new(move |v: f64| {
            sorted.partition_point(|s| *s <= v) as f64 / n
        })))
    }

    /// Evaluates the loss at a pair of latent values.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::HingeDiff => (y - x).max(0.0),
            Self::ZeroOne => {
                if x < y {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Per(cdf) => {
                if x < y {
                    (cdf(y) - cdf(x)).abs()
                } else {
                    0.0
                }
            }
            Self::PValue { theta0 } => {
                let t = *theta0;
                if (x < t && y >= t) || (x <= t && y > t) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// How the pair sum is normalized as the instance grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingRule {
    /// No normalization.
    Total,
    /// Divide by `p`.
    PerUnit,
    /// Divide by `p²`.
    PerPair,
}

impl ScalingRule {
    /// The factor `s(p)` applied to the pair sum.
    pub fn factor(&self, p: usize) -> Result<f64> {
        if p == 0 {
            return Err(Error::Domain("scaling needs p ≥ 1".into()));
        }
        let pf = p as f64;
        Ok(match self {
            Self::Total => 1.0,
            Self::PerUnit => 1.0 / pf,
            Self::PerPair => 1.0 / (pf * pf),
        })
    }
}

// ======================================================================
// Ranking losses
// ======================================================================

fn validate_theta(theta: &[f64]) -> Result<()> {
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("latent values must be finite".into()));
    }
    Ok(())
}

/// Additive ranking loss: `s(p) · Σ l(θ_i, θ_j)` over pairs where the
/// ranking places unit `i` before unit `j`. Zero when the ranking sorts the
/// values in nonincreasing order.
pub fn additive_loss(
    ranking: &Ranking,
    theta: &[f64],
    loss: &PairwiseLoss,
    scaling: &ScalingRule,
) -> Result<f64> {
    if ranking.len() != theta.len() {
        return Err(Error::Domain(format!(
            "ranking covers {} units but {} latent values were given",
            ranking.len(),
            theta.len()
        )));
    }
    validate_theta(theta)?;
    let order = ranking.order();
    let mut sum = 0.0;
    for k1 in 0..order.len() {
        let x = theta[order[k1]];
        for &u2 in &order[k1 + 1..] {
            sum += loss.eval(x, theta[u2]);
        }
    }
    Ok(scaling.factor(theta.len())? * sum)
}

/// Positional footrule distance between the ranking and the true descending
/// order of `theta`: `Σ_i |ρ(i) − τ(i)|`. Ties in `theta` are broken by
/// unit index inside the reference ranking.
pub fn footrule_loss(ranking: &Ranking, theta: &[f64]) -> Result<u64> {
    if ranking.len() != theta.len() {
        return Err(Error::Domain(format!(
            "ranking covers {} units but {} latent values were given",
            ranking.len(),
            theta.len()
        )));
    }
    validate_theta(theta)?;
    let tau = descending_ranking(theta);
    Ok(ranking
        .positions()
        .iter()
        .zip(tau.positions())
        .map(|(&r, &t)| r.abs_diff(t) as u64)
        .sum())
}

/// Number of misranked pairs: pairs the ranking places `i` before `j` while
/// `θ_i < θ_j` (strict). Counted in O(p log p) by merge counting.
pub fn inversion_loss(ranking: &Ranking, theta: &[f64]) -> Result<u64> {
    if ranking.len() != theta.len() {
        return Err(Error::Domain(format!(
            "ranking covers {} units but {} latent values were given",
            ranking.len(),
            theta.len()
        )));
    }
    validate_theta(theta)?;
    // Sequence of latent values in rank order; a misranked pair is an
    // ascending strict pair, i.e. a classical inversion of the negated
    // sequence.
    let mut seq: Vec<f64> = ranking.order().iter().map(|&u| -theta[u]).collect();
    let mut buf = vec![0.0; seq.len()];
    Ok(merge_count_inversions(&mut seq, &mut buf))
}

/// Counts pairs `i < j` with `a[i] > a[j]` (strict), sorting `a` ascending
/// as a side effect.
fn merge_count_inversions(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = a.split_at_mut(mid);
    let mut count = merge_count_inversions(left, &mut buf[..mid])
        + merge_count_inversions(right, &mut buf[mid..]);
    // merge with strict counting: taking a right element while strictly
    // smaller than the left head charges all remaining left elements
    let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            count += (left.len() - i) as u64;
            buf[k] = right[j];
            j += 1;
        } else {
            buf[k] = left[i];
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        buf[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        buf[k] = right[j];
        j += 1;
        k += 1;
    }
    a.copy_from_slice(&buf[..n]);
    count
}

/// Verifies the two-sided relation between the misranked-pair count `L` and
/// the footrule distance `R`: `½·L ≤ R ≤ 2·L`.
pub fn sandwich_check(ranking: &Ranking, theta: &[f64]) -> Result<bool> {
    let l = inversion_loss(ranking, theta)?;
    let r = footrule_loss(ranking, theta)?;
    Ok(l <= 2 * r && r <= 2 * l)
}

// ======================================================================
// Shape constants and bounds
// ======================================================================

/// The four constants describing a "restrained" pairwise loss: Lipschitz
/// constant `lambda` on `{x < y}`, a near-diagonal jump cap `d`
/// (`l(x, x+ε) < d + lambda·ε`), and a linear lower bound
/// `l(x, y) > b·(y−x)` holding for gaps below `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrainedConstants {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl RestrainedConstants {
    /// Exact constants for [`PairwiseLoss::HingeDiff`]: Lipschitz 1, no
    /// diagonal jump, and the gap itself as its own lower bound at any
    /// range.
    pub fn hinge_diff() -> Self {
        Self {
            lambda: 1.0,
            a: f64::INFINITY,
            b: 1.0,
            d: 0.0,
        }
    }
}

/// The three expected-loss envelopes for a restrained loss on independent
/// `X₁, X₂` with means `mu1, mu2` and standard deviations `s1, s2`:
/// `upper_i` bounds `E l(X₁, X₂)` when `mu1 > mu2` (ranking the larger mean
/// first), `upper_ii` bounds it unconditionally, and `lower_iii` bounds the
/// swapped expectation `E l(X₂, X₁)` from below when the mean gap beats
/// `2√(2λ(s1²+s2²)/b)`. Inapplicable bounds are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseBounds {
    pub upper_i: Option<f64>,
    pub upper_ii: f64,
    pub lower_iii: Option<f64>,
}

/// Evaluates the closed-form expected-loss envelopes for a restrained loss
/// with constants `c` on independent variables with the given moments.
pub fn pairwise_expected_loss_bounds(
    c: &RestrainedConstants,
    mu1: f64,
    mu2: f64,
    s1: f64,
    s2: f64,
) -> Result<PairwiseBounds> {
    if !(s1 >= 0.0) || !(s2 >= 0.0) || !mu1.is_finite() || !mu2.is_finite() {
        return Err(Error::Domain(
            "bounds need finite means and nonnegative deviations".into(),
        ));
    }
    if !(c.lambda >= 0.0) || !(c.b > 0.0) || !(c.a > 0.0) || !(c.d >= 0.0) {
        return Err(Error::Domain(
            "restrained constants must satisfy λ ≥ 0, a > 0, b > 0, D ≥ 0".into(),
        ));
    }
    let var_sum = s1 * s1 + s2 * s2;
    let gap = mu1 - mu2;

    let upper_i = if gap > 0.0 {
        Some(c.d * (var_sum / (gap * gap)).min(1.0) + 3.0 * c.lambda * var_sum / gap)
    } else {
        None
    };

    let upper_ii = c.d
        + 4.0 * c.lambda * (mu2 - mu1).max(0.0)
        + (2.0 + 2.0 * std::f64::consts::SQRT_2) * c.lambda * var_sum.sqrt();

    let lower_iii = if gap > 2.0 * (2.0 * c.lambda * var_sum / c.b).sqrt() {
        let shrink = c.b.powi(3) / ((c.b + c.lambda) * (c.b + c.lambda));
        Some(0.5 * shrink * gap.min(c.a))
    } else {
        None
    };

    Ok(PairwiseBounds {
        upper_i,
        upper_ii,
        lower_iii,
    })
}

/// Outcome of the randomized shape probe on a pairwise loss.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrainedReport {
    /// Largest finite-difference slope seen strictly inside `{x < y}`.
    pub lambda_hat: f64,
    /// Largest observed near-diagonal excess `(l(x, x+ε) − λ̂·ε)₊`.
    pub d_hat: f64,
    /// For each swept gap cap `a`, the smallest observed ratio
    /// `l(x,y)/(y−x)` over pairs with `y − x < a` — the best linear lower
    /// bound `b` the data supports at that range.
    pub a_b_witness: Vec<(f64, f64)>,
    /// Sampled pairs where the loss decreased in `y` or increased in `x`.
    pub monotonicity_violations: usize,
    /// Whether the probe saw restrained behavior: a finite slope and a
    /// positive lower-bound constant at some range.
    pub looks_restrained: bool,
}

/// Randomized finite-difference probe of the restrained-loss constants on a
/// box. Diagnostic only: constants are existential and a probe can exhibit
/// violations but cannot certify their absence.
pub fn restrained_probe<R: Rng + ?Sized>(
    loss: &PairwiseLoss,
    domain: (f64, f64),
    n_samples: usize,
    rng: &mut R,
) -> Result<RestrainedReport> {
    let (lo, hi) = domain;
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::Domain(format!(
            "probe domain must be a finite box, got ({lo}, {hi})"
        )));
    }
    if n_samples == 0 {
        return Err(Error::Domain("probe needs at least one sample".into()));
    }
    let width = hi - lo;
    let delta = 1e-4 * width;

    let mut lambda_hat = 0.0_f64;
    let mut violations = 0usize;
    let a_sweep = [width / 64.0, width / 16.0, width / 4.0, width / 2.0];
    let mut b_hat = [f64::INFINITY; 4];

    for _ in 0..n_samples {
        // a strict pair x < y inside the box, kept away from the diagonal
        // so perturbed copies stay inside {x < y}
        let x = lo + rng.random::<f64>() * (width - 4.0 * delta);
        let gap = (rng.random::<f64>() * (hi - x - 3.0 * delta)).max(0.0) + 3.0 * delta;
        let y = (x + gap).min(hi);
        let l0 = loss.eval(x, y);

        // Lipschitz slope strictly inside the region
        let dx = (rng.random::<f64>() - 0.5) * 2.0 * delta;
        let dy = (rng.random::<f64>() - 0.5) * 2.0 * delta;
        let (x2, y2) = (x + dx, y + dy);
        if x2 < y2 {
            let l2 = loss.eval(x2, y2);
            let denom = dx.abs() + dy.abs();
            if denom > 0.0 {
                lambda_hat = lambda_hat.max((l2 - l0).abs() / denom);
            }
        }

        // monotonicity: nondecreasing in y, nonincreasing in x
        if y + delta <= hi && loss.eval(x, y + delta) < l0 - 1e-12 {
            violations += 1;
        }
        if x + delta < y && loss.eval(x + delta, y) > l0 + 1e-12 {
            violations += 1;
        }

        // linear lower bound per gap cap
        let ratio = l0 / (y - x);
        for (cap, b) in a_sweep.iter().zip(b_hat.iter_mut()) {
            if y - x < *cap {
                *b = b.min(ratio);
            }
        }
    }

    // near-diagonal jump, measured after λ̂ is known
    let mut d_hat = 0.0_f64;
    for _ in 0..n_samples {
        let x = lo + rng.random::<f64>() * (width * 0.98);
        let eps = rng.random::<f64>() * (width / 100.0) + 1e-12;
        let v = loss.eval(x, (x + eps).min(hi));
        d_hat = d_hat.max((v - lambda_hat * eps).max(0.0));
    }

    let a_b_witness: Vec<(f64, f64)> = a_sweep
        .iter()
        .zip(&b_hat)
        .map(|(a, b)| (*a, if b.is_finite() { *b } else { 0.0 }))
        .collect();
    let looks_restrained = lambda_hat.is_finite() && a_b_witness.iter().any(|(_, b)| *b > 0.0);

    Ok(RestrainedReport {
        lambda_hat,
        d_hat,
        a_b_witness,
        monotonicity_violations: violations,
        looks_restrained,
    })
}

/// The four-reals inequality relating normalized gaps: for any `x, y, z, w`,
/// the drop from `|x−y|/(|x|+|y|+2)` to `|z−w|/(|z|+|w|+2)` is at most
/// `½·Δ·(1 + Δ/2)` where `Δ = |x−z| + |y−w|`.
pub fn normalized_gap_inequality(x: f64, y: f64, z: f64, w: f64) -> bool {
    let lhs = (x - y).abs() / (x.abs() + y.abs() + 2.0) - (z - w).abs() / (z.abs() + w.abs() + 2.0);
    let delta = (x - z).abs() + (y - w).abs();
    let rhs = 0.5 * delta * (1.0 + 0.5 * delta);
    lhs <= rhs
}

// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::PriorSpec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_additive(order: &[usize], theta: &[f64], loss: &PairwiseLoss) -> f64 {
        let mut sum = 0.0;
        for i in 0..order.len() {
            for j in (i + 1)..order.len() {
                sum += loss.eval(theta[order[i]], theta[order[j]]);
            }
        }
        sum
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::from_positions(vec![0, 1, 2]).is_ok());
        assert!(Ranking::from_positions(vec![0, 0, 2]).is_err());
        assert!(Ranking::from_positions(vec![0, 3, 1]).is_err());
        assert!(Ranking::from_order(&[2, 0, 1]).is_ok());
        assert!(Ranking::from_order(&[2, 2, 1]).is_err());
        let r = Ranking::from_order(&[2, 0, 1]).unwrap();
        assert_eq!(r.positions(), &[1, 2, 0]);
        assert_eq!(r.order(), vec![2, 0, 1]);
    }

    #[test]
    fn descending_ranking_breaks_ties_by_index() {
        let r = descending_ranking(&[1.0, 3.0, 3.0, 0.5]);
        // unit1 and unit2 tie; unit1 (lower index) ranks first
        assert_eq!(r.order(), vec![1, 2, 0, 3]);
    }

    #[test]
    fn additive_loss_reference_cases() {
        let hinge = PairwiseLoss::HingeDiff;
        // correctly sorted: zero loss
        let l = additive_loss(
            &Ranking::identity(3),
            &[3.0, 2.0, 1.0],
            &hinge,
            &ScalingRule::Total,
        )
        .unwrap();
        assert_eq!(l, 0.0);
        // one misranked pair with gap 1
        let l = additive_loss(
            &Ranking::identity(2),
            &[1.0, 2.0],
            &hinge,
            &ScalingRule::Total,
        )
        .unwrap();
        assert_eq!(l, 1.0);
        // arbitrary ranking matches the double-loop oracle
        let theta = [1.0, 2.0, 3.0];
        let r = Ranking::from_positions(vec![2, 1, 0]).unwrap();
        let l = additive_loss(&r, &theta, &hinge, &ScalingRule::Total).unwrap();
        assert_eq!(l, brute_additive(&r.order(), &theta, &hinge));
        // scaling rules divide accordingly
        let lp = additive_loss(&r, &theta, &hinge, &ScalingRule::PerUnit).unwrap();
        assert_abs_diff_eq!(lp, l / 3.0, epsilon = 1e-15);
        let lpp = additive_loss(&r, &theta, &hinge, &ScalingRule::PerPair).unwrap();
        assert_abs_diff_eq!(lpp, l / 9.0, epsilon = 1e-15);
        // length mismatch is an error
        assert!(additive_loss(&r, &[1.0], &hinge, &ScalingRule::Total).is_err());
    }

    #[test]
    fn footrule_reference_cases() {
        // descending values under the identity: perfect
        assert_eq!(
            footrule_loss(&Ranking::identity(3), &[3.0, 2.0, 1.0]).unwrap(),
            0
        );
        // ascending values under the identity: full reversal, |1−3|+0+|3−1|
        assert_eq!(
            footrule_loss(&Ranking::identity(3), &[1.0, 2.0, 3.0]).unwrap(),
            4
        );
    }

    #[test]
    fn footrule_matches_definition_oracle_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = rng.random_range(2..=8);
            let theta: Vec<f64> = (0..p).map(|_| rng.random_range(-5.0..5.0)).collect();
            let mut order: Vec<usize> = (0..p).collect();
            for k in (1..p).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let r = Ranking::from_order(&order).unwrap();
            // oracle: τ by repeated selection of the largest remaining value
            let mut remaining: Vec<usize> = (0..p).collect();
            let mut tau = vec![0usize; p];
            let mut pos = 0;
            while !remaining.is_empty() {
                let (slot, _) = remaining
                    .iter()
                    .enumerate()
                    .max_by(|(_, &u), (_, &v)| {
                        theta[u].partial_cmp(&theta[v]).unwrap().then(
                            // prefer the lower index on ties
                            v.cmp(&u),
                        )
                    })
                    .unwrap();
                tau[remaining.remove(slot)] = pos;
                pos += 1;
            }
            let oracle: u64 = (0..p)
                .map(|i| r.positions()[i].abs_diff(tau[i]) as u64)
                .sum();
            assert_eq!(footrule_loss(&r, &theta).unwrap(), oracle);
        }
    }

    #[test]
    fn inversion_reference_cases() {
        assert_eq!(
            inversion_loss(&Ranking::identity(3), &[3.0, 2.0, 1.0]).unwrap(),
            0
        );
        assert_eq!(
            inversion_loss(&Ranking::identity(3), &[1.0, 2.0, 3.0]).unwrap(),
            3
        );
    }

    #[test]
    fn inversion_merge_count_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let p = rng.random_range(2..=64);
            // duplicates included to exercise strictness
            let theta: Vec<f64> = (0..p).map(|_| rng.random_range(-3..4) as f64).collect();
            let mut order: Vec<usize> = (0..p).collect();
            for k in (1..p).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let r = Ranking::from_order(&order).unwrap();
            let mut brute = 0u64;
            for k1 in 0..p {
                for k2 in (k1 + 1)..p {
                    if theta[order[k1]] < theta[order[k2]] {
                        brute += 1;
                    }
                }
            }
            assert_eq!(inversion_loss(&r, &theta).unwrap(), brute);
        }
    }

    #[test]
    fn sandwich_reference_and_randomized() {
        assert!(sandwich_check(&Ranking::identity(3), &[3.0, 2.0, 1.0]).unwrap());
        // full reversal: L=3, R=4 → 1.5 ≤ 4 ≤ 6
        assert!(sandwich_check(&Ranking::identity(3), &[1.0, 2.0, 3.0]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..2000 {
            let p = rng.random_range(2..=64);
            let theta: Vec<f64> = (0..p).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mut order: Vec<usize> = (0..p).collect();
            for k in (1..p).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let r = Ranking::from_order(&order).unwrap();
            assert!(sandwich_check(&r, &theta).unwrap());
            // one-sided refinement: misranked pairs never exceed footrule
            assert!(inversion_loss(&r, &theta).unwrap() <= footrule_loss(&r, &theta).unwrap());
        }
    }

    #[test]
    fn pvalue_loss_truth_table() {
        let l = PairwiseLoss::PValue { theta0: 0.0 };
        assert_eq!(l.eval(-1.0, 1.0), 1.0); // straddles
        assert_eq!(l.eval(-1.0, 0.0), 1.0); // y on the threshold
        assert_eq!(l.eval(0.0, 1.0), 1.0); // x on the threshold
        assert_eq!(l.eval(0.0, 0.0), 0.0); // both on it
        assert_eq!(l.eval(0.5, 1.0), 0.0); // same side above
        assert_eq!(l.eval(-2.0, -1.0), 0.0); // same side below
        assert_eq!(l.eval(1.0, -1.0), 0.0); // correctly ordered
    }

    #[test]
    fn per_loss_uses_reference_cdf() {
        let prior = PriorSpec::normal(0.0, 1.0).unwrap();
        let per = PairwiseLoss::per_from_prior(&prior).unwrap();
        let expect = prior.cdf(1.0).unwrap() - prior.cdf(-1.0).unwrap();
        assert_abs_diff_eq!(per.eval(-1.0, 1.0), expect, epsilon = 1e-12);
        assert_eq!(per.eval(1.0, -1.0), 0.0);
        assert!(PairwiseLoss::per_from_prior(&PriorSpec::UniformImproper).is_err());

        let emp = PairwiseLoss::per_empirical(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(emp.eval(0.5, 2.5), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn restrained_probe_hinge() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let rep =
            restrained_probe(&PairwiseLoss::HingeDiff, (-5.0, 5.0), 20_000, &mut rng).unwrap();
        assert_relative_eq!(rep.lambda_hat, 1.0, max_relative = 0.02);
        assert!(rep.d_hat < 1e-9, "d_hat = {}", rep.d_hat);
        assert_eq!(rep.monotonicity_violations, 0);
        for (_, b) in &rep.a_b_witness {
            assert_relative_eq!(*b, 1.0, max_relative = 1e-9);
        }
        assert!(rep.looks_restrained);
    }

    #[test]
    fn restrained_probe_zero_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rep = restrained_probe(&PairwiseLoss::ZeroOne, (-5.0, 5.0), 20_000, &mut rng).unwrap();
        // constant 1 strictly inside {x<y}: flat, with a unit diagonal jump
        assert_eq!(rep.lambda_hat, 0.0);
        assert_abs_diff_eq!(rep.d_hat, 1.0, epsilon = 1e-12);
        assert_eq!(rep.monotonicity_violations, 0);
        // lower-bound constant scales like 1/a
        for (a, b) in &rep.a_b_witness {
            assert!(*b >= 1.0 / a, "b̂({a}) = {b}");
        }
        assert!(rep.looks_restrained);
    }

    #[test]
    fn restrained_probe_flags_pvalue_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let rep = restrained_probe(
            &PairwiseLoss::PValue { theta0: 0.0 },
            (-5.0, 5.0),
            20_000,
            &mut rng,
        )
        .unwrap();
        // same-side pairs are free, so no linear lower bound can hold
        assert_eq!(rep.monotonicity_violations, 0);
        assert!(!rep.looks_restrained);
        assert!(rep.a_b_witness.iter().all(|(_, b)| *b == 0.0));
    }

    #[test]
    fn pairwise_bounds_reference_values() {
        let c = RestrainedConstants::hinge_diff();
        let b = pairwise_expected_loss_bounds(&c, 10.0, 0.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.upper_i.unwrap(), 0.6, epsilon = 1e-12);
        // degenerate spread: certain ordering, zero upper bound
        let b = pairwise_expected_loss_bounds(&c, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(b.upper_i.unwrap(), 0.0);
        // wrong-order mean gap leaves only the unconditional bound
        let b = pairwise_expected_loss_bounds(&c, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert!(b.upper_i.is_none());
        assert!(b.upper_ii > 4.0);
        assert!(b.lower_iii.is_none());
    }

    #[test]
    fn pairwise_bounds_envelope_monte_carlo() {
        // X1 ~ N(2, 0.09), X2 ~ N(0, 0.09), hinge loss.
        let c = RestrainedConstants::hinge_diff();
        let (mu1, mu2, s) = (2.0, 0.0, 0.3);
        let b = pairwise_expected_loss_bounds(&c, mu1, mu2, s, s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7000);
        let n = 100_000;
        let mut fwd = 0.0; // E l(X1, X2)
        let mut rev = 0.0; // E l(X2, X1)
        for _ in 0..n {
            let x1 = mu1 + s * standard_normal(&mut rng);
            let x2 = mu2 + s * standard_normal(&mut rng);
            fwd += PairwiseLoss::HingeDiff.eval(x1, x2);
            rev += PairwiseLoss::HingeDiff.eval(x2, x1);
        }
        fwd /= n as f64;
        rev /= n as f64;
        assert!(fwd <= b.upper_i.unwrap(), "{fwd} vs {:?}", b.upper_i);
        assert!(fwd <= b.upper_ii);
        // precondition: gap 2 > 2√(2·1·0.18/1) = 1.2 → applicable
        let lower = b.lower_iii.expect("precondition holds");
        assert!(rev >= lower, "{rev} vs {lower}");
    }

    fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
        use rand_distr::Distribution;
        rand_distr::StandardNormal.sample(rng)
    }

    #[test]
    fn normalized_gap_inequality_reference_cases() {
        assert!(normalized_gap_inequality(3.0, -2.0, 3.0, -2.0)); // identical
        assert!(normalized_gap_inequality(1.0, -1.0, 0.0, 0.0)); // ½ ≤ 2
    }

    proptest! {
        #[test]
        fn losses_vanish_on_correct_order(x in -1e6f64..1e6, gap in 0.0f64..1e6) {
            let y = x - gap; // x ≥ y
            let prior = PriorSpec::normal(0.0, 1.0).unwrap();
            let losses = [
                PairwiseLoss::HingeDiff,
                PairwiseLoss::ZeroOne,
                PairwiseLoss::per_from_prior(&prior).unwrap(),
                PairwiseLoss::PValue { theta0: 0.3 },
            ];
            for l in &losses {
                prop_assert_eq!(l.eval(x, y), 0.0);
            }
        }

        #[test]
        fn losses_are_nonnegative_and_per_is_bounded(
            x in -1e6f64..1e6,
            y in -1e6f64..1e6,
        ) {
            let prior = PriorSpec::normal(0.0, 1.0).unwrap();
            let per = PairwiseLoss::per_from_prior(&prior).unwrap();
            for l in [
                PairwiseLoss::HingeDiff,
                PairwiseLoss::ZeroOne,
                per.clone(),
                PairwiseLoss::PValue { theta0: 0.0 },
            ] {
                prop_assert!(l.eval(x, y) >= 0.0);
            }
            let v = per.eval(x, y);
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn zero_one_total_equals_inversion_count(
            theta in prop::collection::vec(-100.0f64..100.0, 2..24),
            seed in any::<u64>(),
        ) {
            let p = theta.len();
            let mut order: Vec<usize> = (0..p).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in (1..p).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let r = Ranking::from_order(&order).unwrap();
            let add = additive_loss(&r, &theta, &PairwiseLoss::ZeroOne, &ScalingRule::Total)
                .unwrap();
            let inv = inversion_loss(&r, &theta).unwrap();
            prop_assert_eq!(add, inv as f64);
        }

        #[test]
        fn zero_loss_iff_sorted_descending(
            theta in prop::collection::vec(-100.0f64..100.0, 2..16),
            seed in any::<u64>(),
        ) {
            // make values distinct
            let theta: Vec<f64> = theta
                .iter()
                .enumerate()
                .map(|(i, t)| t + i as f64 * 1e-6)
                .collect();
            let p = theta.len();
            let mut order: Vec<usize> = (0..p).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in (1..p).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let r = Ranking::from_order(&order).unwrap();
            let add = additive_loss(&r, &theta, &PairwiseLoss::HingeDiff, &ScalingRule::Total)
                .unwrap();
            let sorted = order
                .windows(2)
                .all(|w| theta[w[0]] >= theta[w[1]]);
            prop_assert_eq!(add == 0.0, sorted);
        }

        #[test]
        fn normalized_gap_inequality_randomized(
            x in -1e8f64..1e8,
            y in -1e8f64..1e8,
            z in -1e8f64..1e8,
            w in -1e8f64..1e8,
        ) {
            prop_assert!(normalized_gap_inequality(x, y, z, w));
        }
    }
}
