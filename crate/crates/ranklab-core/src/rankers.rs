//! The five ranking estimators: observed-value sort, one-sided p-value
//! sort, posterior-mean sort, posterior expected rank (PER), and the
//! footrule-optimal assignment ranking.
//!
//! Each estimator maps observed units `(x_i, σ_i)` plus an estimating prior
//! to a [`Ranking`] (position 0 = believed largest latent value). All sorts
//! are stable with a unit-id tiebreak so results are reproducible across
//! platforms; the Monte Carlo footrule ranker is deterministic given its
//! seed.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::solve_assignment;
use crate::distributions::{ErrorModel, PriorSpec};
use crate::losses::{descending_ranking, Ranking};
use crate::posterior::{pairwise_less_prob, posterior, PosteriorGrid, DEFAULT_TOL};
use crate::{Error, Result};

// ======================================================================
// Inputs
// ======================================================================

/// One observed unit: point estimate `x` with known error scale `sigma`,
/// plus a stable id used for tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitData {
    pub x: f64,
    pub sigma: f64,
    pub id: usize,
}

impl UnitData {
    pub fn new(x: f64, sigma: f64, id: usize) -> Result<Self> {
        if !x.is_finite() || !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Domain(format!(
                "unit needs finite x and sigma ≥ 0, got ({x}, {sigma})"
            )));
        }
        Ok(Self { x, sigma, id })
    }
}

/// Which ranking estimator to run, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankerSpec {
    /// Descending sort by observed `x`.
    Value,
    /// Ascending sort by the one-sided p-value against `theta0`.
    PValueRank { theta0: f64 },
    /// Descending sort by posterior mean under the estimating prior.
    PosteriorMean { prior: PriorSpec },
    /// Ascending sort by posterior expected rank (sum of pairwise
    /// probabilities of being exceeded).
    PerRank { prior: PriorSpec },
    /// Footrule-optimal ranking via Monte Carlo rank distributions and an
    /// exact assignment solve.
    FootruleRank { prior: PriorSpec, mc_samples: usize },
}

impl RankerSpec {
    /// Short stable name used in reports and CSV rows.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Value => "value",
            Self::PValueRank { .. } => "p-value",
            Self::PosteriorMean { .. } => "posterior-mean",
            Self::PerRank { .. } => "per",
            Self::FootruleRank { .. } => "footrule",
        }
    }

    /// Checks variant parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Value => Ok(()),
            Self::PValueRank { theta0 } => {
                if theta0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Config("p-value ranker needs a finite theta0".into()))
                }
            }
            Self::PosteriorMean { .. } | Self::PerRank { .. } => Ok(()),
            Self::FootruleRank { mc_samples, .. } => {
                if *mc_samples >= 1000 {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "footrule ranker needs mc_samples ≥ 1000, got {mc_samples}"
                    )))
                }
            }
        }
    }
}

/// Runs the estimator described by `spec`. The rng is consumed only by
/// [`RankerSpec::FootruleRank`]; the other estimators are deterministic
/// functions of the data.
pub fn run_ranker<R: Rng + ?Sized>(
    spec: &RankerSpec,
    units: &[UnitData],
    error: &ErrorModel,
    rng: &mut R,
) -> Result<Ranking> {
    spec.validate()?;
    match spec {
        RankerSpec::Value => Ok(rank_value(units)),
        RankerSpec::PValueRank { theta0 } => Ok(rank_pvalue(units, *theta0, error)),
        RankerSpec::PosteriorMean { prior } => rank_posterior_mean(units, prior, error),
        RankerSpec::PerRank { prior } => rank_per(units, prior, error),
        RankerSpec::FootruleRank { prior, mc_samples } => {
            rank_footrule(units, prior, error, *mc_samples, rng)
        }
    }
}

// ======================================================================
// Score-sort estimators
// ======================================================================

fn ranking_by<F>(units: &[UnitData], mut better: F) -> Ranking
where
    F: FnMut(usize, usize) -> std::cmp::Ordering,
{
    let mut idx: Vec<usize> = (0..units.len()).collect();
    idx.sort_by(|&a, &b| better(a, b).then_with(|| units[a].id.cmp(&units[b].id)));
    Ranking::from_order(&idx).expect("argsort yields a permutation")
}

/// Descending sort by observed value, ties by id.
pub fn rank_value(units: &[UnitData]) -> Ranking {
    ranking_by(units, |a, b| units[b].x.total_cmp(&units[a].x))
}

/// One-sided p-value of the test against `theta0`:
/// `P(X ≥ x | Θ = theta0, σ)`. Exact observations (σ = 0) take the limit
/// values 0 above, 1 below, and ½ at the threshold.
pub fn one_sided_pvalue(error: &ErrorModel, x: f64, sigma: f64, theta0: f64) -> f64 {
    if sigma == 0.0 {
        return if x > theta0 {
            0.0
        } else if x < theta0 {
            1.0
        } else {
            0.5
        };
    }
    error.std_sf((x - theta0) / sigma)
}

/// Ascending sort by one-sided p-value against `theta0`, ties by id.
pub fn rank_pvalue(units: &[UnitData], theta0: f64, error: &ErrorModel) -> Ranking {
    let pvals: Vec<f64> = units
        .iter()
        .map(|u| one_sided_pvalue(error, u.x, u.sigma, theta0))
        .collect();
    ranking_by(units, |a, b| pvals[a].total_cmp(&pvals[b]))
}

// ======================================================================
// Posterior-based estimators
// ======================================================================

/// The per-unit posterior, treating exact observations (σ = 0) as point
/// masses at `x` regardless of the estimating prior's support.
fn unit_posterior(unit: &UnitData, prior: &PriorSpec, error: &ErrorModel) -> Result<PosteriorGrid> {
    if unit.sigma == 0.0 {
        Ok(PosteriorGrid::point_mass(unit.x, 0.0))
    } else {
        posterior(prior, error, unit.x, unit.sigma, DEFAULT_TOL)
    }
}

/// Descending sort by posterior mean, ties by id. Exact observations use
/// their observed value as the mean.
pub fn rank_posterior_mean(
    units: &[UnitData],
    prior: &PriorSpec,
    error: &ErrorModel,
) -> Result<Ranking> {
    let means: Vec<f64> = units
        .par_iter()
        .map(|u| unit_posterior(u, prior, error).map(|g| g.mean()))
        .collect::<Result<_>>()?;
    Ok(ranking_by(units, |a, b| means[b].total_cmp(&means[a])))
}

/// Posterior expected rank: `r_i = Σ_{j≠i} P(Θ_i < Θ_j)` over independent
/// unit posteriors, sorted ascending (small expected rank first), ties by
/// id.
pub fn rank_per(units: &[UnitData], prior: &PriorSpec, error: &ErrorModel) -> Result<Ranking> {
    let posts: Vec<PosteriorGrid> = units
        .par_iter()
        .map(|u| unit_posterior(u, prior, error))
        .collect::<Result<_>>()?;
    let p = units.len();
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| ((i + 1)..p).map(move |j| (i, j)))
        .collect();
    let probs: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| pairwise_less_prob(&posts[i], &posts[j]))
        .collect();
    let mut r = vec![0.0f64; p];
    for (&(i, j), &p_ij) in pairs.iter().zip(&probs) {
        // complementarity is exact by construction
        r[i] += p_ij;
        r[j] += 1.0 - p_ij;
    }
    Ok(ranking_by(units, |a, b| r[a].total_cmp(&r[b])))
}

/// Footrule-optimal ranking: estimates each unit's posterior rank
/// distribution from `mc_samples` joint draws, builds the expected-distance
/// cost `c(i,k) = E|k − τ(i)|`, and solves the assignment problem exactly.
/// All-exact instances (every σ = 0) short-circuit to [`rank_value`].
pub fn rank_footrule<R: Rng + ?Sized>(
    units: &[UnitData],
    prior: &PriorSpec,
    error: &ErrorModel,
    mc_samples: usize,
    rng: &mut R,
) -> Result<Ranking> {
    if mc_samples < 1000 {
        return Err(Error::Config(format!(
            "footrule ranking needs mc_samples ≥ 1000, got {mc_samples}"
        )));
    }
    let p = units.len();
    if p == 0 {
        return Ok(Ranking::identity(0));
    }
    if units.iter().all(|u| u.sigma == 0.0) {
        return Ok(rank_value(units));
    }
    let posts: Vec<PosteriorGrid> = units
        .par_iter()
        .map(|u| unit_posterior(u, prior, error))
        .collect::<Result<_>>()?;
    // joint draws, sampled unit by unit in id order for determinism
    let draws: Vec<Vec<f64>> = posts.iter().map(|g| g.sample(rng, mc_samples)).collect();

    // empirical distribution of each unit's rank across joint draws
    let mut counts = vec![vec![0u32; p]; p];
    let mut snapshot = vec![0.0f64; p];
    for s in 0..mc_samples {
        for (slot, d) in snapshot.iter_mut().zip(&draws) {
            *slot = d[s];
        }
        let tau = descending_ranking(&snapshot);
        for (i, &pos) in tau.positions().iter().enumerate() {
            counts[i][pos] += 1;
        }
    }
    let m = mc_samples as f64;
    let cost: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|k| {
                    counts[i]
                        .iter()
                        .enumerate()
                        .map(|(pos, &c)| c as f64 * k.abs_diff(pos) as f64)
                        .sum::<f64>()
                        / m
                })
                .collect()
        })
        .collect();
    Ranking::from_positions(solve_assignment(&cost)?)
}

// ======================================================================
