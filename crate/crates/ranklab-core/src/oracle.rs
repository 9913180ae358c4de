//! Ground-truth machinery: Monte Carlo posterior expected loss for a fixed
//! ranking, and exhaustive Bayes-optimal permutation search at small p.
//!
//! The brute-force search uses common random numbers: every candidate
//! permutation is scored from one shared sample matrix, so comparisons
//! between permutations are paired and the argmin is stable far below the
//! marginal Monte Carlo noise level.

use rand::Rng;

use crate::distributions::{ErrorModel, PriorSpec};
use crate::losses::{PairwiseLoss, Ranking, ScalingRule};
use crate::posterior::{posterior, PosteriorGrid, DEFAULT_TOL};
use crate::rankers::{rank_posterior_mean, UnitData};
use crate::{Error, Result};

/// Maximum instance size for exhaustive permutation search (8! = 40320).
pub const BRUTEFORCE_MAX_P: usize = 8;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

fn mean_and_se(samples: &[f64]) -> LossEstimate {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    LossEstimate { mean, std_error, n }
}

fn draw_matrix<R: Rng + ?Sized>(
    posteriors: &[PosteriorGrid],
    n: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    posteriors.iter().map(|g| g.sample(rng, n)).collect()
}

/// Monte Carlo estimate of the posterior expected additive loss of a fixed
/// ranking over independent unit posteriors. Needs `n ≥ 100` draws.
pub fn expected_loss_mc<R: Rng + ?Sized>(
    perm: &Ranking,
    posteriors: &[PosteriorGrid],
    loss: &PairwiseLoss,
    scaling: &ScalingRule,
    n: usize,
    rng: &mut R,
) -> Result<LossEstimate> {
    if n < 100 {
        return Err(Error::Domain(format!(
            "Monte Carlo loss needs n ≥ 100, got {n}"
        )));
    }
    if perm.len() != posteriors.len() {
        return Err(Error::Domain(format!(
            "ranking covers {} units but {} posteriors were given",
            perm.len(),
            posteriors.len()
        )));
    }
    let draws = draw_matrix(posteriors, n, rng);
    let samples = per_sample_losses(perm, &draws, loss, scaling, n)?;
    Ok(mean_and_se(&samples))
}

fn per_sample_losses(
    perm: &Ranking,
    draws: &[Vec<f64>],
    loss: &PairwiseLoss,
    scaling: &ScalingRule,
    n: usize,
) -> Result<Vec<f64>> {
    let order = perm.order();
    let p = order.len();
    let factor = if p == 0 { 1.0 } else { scaling.factor(p)? };
    let samples = (0..n)
        .map(|s| {
            let mut total = 0.0;
            for k1 in 0..p {
                let x = draws[order[k1]][s];
                for &u2 in &order[k1 + 1..] {
                    total += loss.eval(x, draws[u2][s]);
                }
            }
            factor * total
        })
        .collect();
    Ok(samples)
}

/// Exhaustive Bayes-optimal search: returns the permutation minimizing the
/// Monte Carlo posterior expected loss, scored with common random numbers,
/// together with the winner's loss estimate. Equal minima resolve to the
/// lexicographically first rank order. Capped at p ≤ 8.
pub fn bayes_optimal_bruteforce<R: Rng + ?Sized>(
    posteriors: &[PosteriorGrid],
    loss: &PairwiseLoss,
    scaling: &ScalingRule,
    n: usize,
    rng: &mut R,
) -> Result<(Ranking, LossEstimate)> {
    let p = posteriors.len();
    if p > BRUTEFORCE_MAX_P {
        return Err(Error::SizeLimit(format!(
            "exhaustive search is capped at p ≤ {BRUTEFORCE_MAX_P}, got {p}"
        )));
    }
    if n < 100 {
        return Err(Error::Domain(format!(
            "Monte Carlo loss needs n ≥ 100, got {n}"
        )));
    }
    let draws = draw_matrix(posteriors, n, rng);

    // additive losses factorize over independent pairs: the expected loss
    // of any permutation is a sum of entries of one shared pair-mean matrix
    let mut pair_mean = vec![vec![0.0f64; p]; p];
    for i in 0..p {
        for j in 0..p {
            if i != j {
                let acc: f64 = draws[i]
                    .iter()
                    .zip(&draws[j])
                    .map(|(&a, &b)| loss.eval(a, b))
                    .sum();
                pair_mean[i][j] = acc / n as f64;
            }
        }
    }

    let mut best_order: Vec<usize> = (0..p).collect();
    let mut best_score = f64::INFINITY;
    for_each_permutation(p, |order| {
        let mut score = 0.0;
        for k1 in 0..p {
            for &u2 in &order[k1 + 1..] {
                score += pair_mean[order[k1]][u2];
            }
        }
        if score < best_score {
            best_score = score;
            best_order.copy_from_slice(order);
        }
    });

    let ranking = Ranking::from_order(&best_order)?;
    let samples = per_sample_losses(&ranking, &draws, loss, scaling, n)?;
    Ok((ranking, mean_and_se(&samples)))
}

/// Visits every permutation of `0..p` in lexicographic order.
fn for_each_permutation<F: FnMut(&[usize])>(p: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..p).collect();
    loop {
        f(&perm);
        // next_permutation
        let Some(i) = (0..p.saturating_sub(1))
            .rev()
            .find(|&i| perm[i] < perm[i + 1])
        else {
            return;
        };
        let j = (i + 1..p).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

// ======================================================================
// Heuristic-vs-oracle agreement runs
// ======================================================================

/// One instance where the posterior-mean ranking differed from the
/// brute-force optimum, with the Monte Carlo loss gap between the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisagreementCase {
    pub instance: usize,
    /// Heuristic mean loss minus oracle mean loss (expected ≥ 0 up to noise).
    pub gap: f64,
    /// `sqrt(se_heuristic² + se_oracle²)`.
    pub combined_se: f64,
}

/// The two loss estimates for one compared instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceComparison {
    pub instance: usize,
    pub agree: bool,
    pub heuristic: LossEstimate,
    pub oracle: LossEstimate,
}

/// Outcome of comparing the posterior-mean ranking against the exhaustive
/// Bayes-optimal permutation over many random instances.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAgreementReport {
    pub p: usize,
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: Vec<DisagreementCase>,
    pub per_instance: Vec<InstanceComparison>,
}

impl OracleAgreementReport {
    /// Fraction of instances where the two rankings coincided exactly.
    pub fn agreement_rate(&self) -> f64 {
        self.agreements as f64 / self.instances as f64
    }

    /// Largest |gap| / combined-SE ratio among disagreements (0 if none).
    pub fn max_gap_over_se(&self) -> f64 {
        self.disagreements
            .iter()
            .map(|d| d.gap.abs() / d.combined_se.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// True when every disagreement's loss gap is within `k` combined SEs.
    pub fn all_within(&self, k: f64) -> bool {
        self.max_gap_over_se() <= k
    }
}

/// Monte Carlo draws per loss estimate in agreement runs.
const AGREEMENT_MC: usize = 100_000;

/// Compares sort-by-posterior-mean against the brute-force Bayes
/// permutation under the gap loss on `instances` random instances of size
/// `p`: latent values from Normal(0, 4), error scales uniform on
/// [0.3, 0.8], normal errors, estimating prior equal to the true prior.
/// Deterministic for a fixed seed (per-instance derived RNG streams).
pub fn oracle_agreement(p: usize, instances: usize, seed: u64) -> Result<OracleAgreementReport> {
    use rand::SeedableRng;

    if !(2..=BRUTEFORCE_MAX_P).contains(&p) {
        return Err(Error::Domain(format!(
            "agreement runs need 2 ≤ p ≤ {BRUTEFORCE_MAX_P}, got {p}"
        )));
    }
    if instances == 0 {
        return Err(Error::Domain("agreement runs need ≥ 1 instance".into()));
    }
    let prior = PriorSpec::normal(0.0, 4.0)?;
    let error = ErrorModel::NormalErr;
    let loss = PairwiseLoss::HingeDiff;
    let scaling = ScalingRule::Total;

    let mut agreements = 0usize;
    let mut disagreements = Vec::new();
    let mut per_instance = Vec::with_capacity(instances);
    for i in 0..instances {
        let stream = |purpose: u64| {
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(((i as u64) << 4) | purpose);
            r
        };
        let mut gen_rng = stream(0);
        let theta = prior.sample(&mut gen_rng, p)?;
        let units: Vec<UnitData> = theta
            .iter()
            .enumerate()
            .map(|(id, &t)| {
                let sigma = gen_rng.random_range(0.3..0.8);
                let x = t + error.sample(&mut gen_rng, sigma, 1)?[0];
                UnitData::new(x, sigma, id)
            })
            .collect::<Result<_>>()?;
        let posteriors: Vec<PosteriorGrid> = units
            .iter()
            .map(|u| posterior(&prior, &error, u.x, u.sigma, DEFAULT_TOL))
            .collect::<Result<_>>()?;

        let heuristic_ranking = rank_posterior_mean(&units, &prior, &error)?;
        let (oracle_ranking, oracle_estimate) =
            bayes_optimal_bruteforce(&posteriors, &loss, &scaling, AGREEMENT_MC, &mut stream(1))?;

        let agree = heuristic_ranking == oracle_ranking;
        let heuristic_estimate = if agree {
            agreements += 1;
            oracle_estimate
        } else {
            let est = expected_loss_mc(
                &heuristic_ranking,
                &posteriors,
                &loss,
                &scaling,
                AGREEMENT_MC,
                &mut stream(2),
            )?;
            let combined_se = (est.std_error * est.std_error
                + oracle_estimate.std_error * oracle_estimate.std_error)
                .sqrt();
            disagreements.push(DisagreementCase {
                instance: i,
                gap: est.mean - oracle_estimate.mean,
                combined_se,
            });
            est
        };
        per_instance.push(InstanceComparison {
            instance: i,
            agree,
            heuristic: heuristic_estimate,
            oracle: oracle_estimate,
        });
    }
    Ok(OracleAgreementReport {
        p,
        instances,
        agreements,
        disagreements,
        per_instance,
    })
}

// ======================================================================
