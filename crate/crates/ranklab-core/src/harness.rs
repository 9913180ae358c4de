//! Experiment harness: generates synthetic ranking problems from a
//! configured generative model, runs a set of rankers across a growing
//! schedule of instance sizes, and aggregates misranking losses into a
//! CSV-ready report.
//!
//! Replicates are paired (every ranker sees the same instance) and draw
//! from RNG streams derived from `(seed, replicate, stage, purpose)`, so
//! sweeps are deterministic regardless of thread scheduling.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{ErrorModel, PriorSpec, SigmaLaw};
use crate::losses::{additive_loss, PairwiseLoss, Ranking, ScalingRule};
use crate::rankers::{run_ranker, RankerSpec, UnitData};
use crate::{Error, Result};

// ======================================================================
// Configuration
// ======================================================================

/// How the estimating prior fed to posterior-based rankers is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EstimatingPrior {
    /// A fitting rule applied to each generated instance.
    Rule(EstimatorRule),
    /// A fixed prior used as-is.
    Fixed(PriorSpec),
}

/// Named estimating-prior fitting rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorRule {
    /// Normal prior with mean and variance estimated from the observed
    /// data, correcting the variance for measurement noise.
    #[serde(rename = "empirical-moments-normal")]
    EmpiricalMomentsNormal,
}

/// Ranking estimator named in a config; the estimating prior is bound in
/// per instance (it may be fitted from the data).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankerKind {
    Value,
    PValueRank { theta0: f64 },
    PosteriorMean,
    PerRank,
    FootruleRank { mc_samples: usize },
}

impl RankerKind {
    /// Binds the resolved estimating prior, yielding a runnable spec.
    pub fn bind(&self, prior: &PriorSpec) -> RankerSpec {
        match self {
            Self::Value => RankerSpec::Value,
            Self::PValueRank { theta0 } => RankerSpec::PValueRank { theta0: *theta0 },
            Self::PosteriorMean => RankerSpec::PosteriorMean {
                prior: prior.clone(),
            },
            Self::PerRank => RankerSpec::PerRank {
                prior: prior.clone(),
            },
            Self::FootruleRank { mc_samples } => RankerSpec::FootruleRank {
                prior: prior.clone(),
                mc_samples: *mc_samples,
            },
        }
    }

    /// Short stable name used in reports and CSV rows.
    pub fn label(&self) -> &'static str {
        self.bind(&PriorSpec::UniformImproper).label()
    }
}

/// Pairwise loss named in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LossSpec {
    HingeDiff,
    ZeroOne,
    /// Percentile loss referenced to the true prior's CDF.
    PerTruePrior,
    PValue {
        theta0: f64,
    },
}

impl LossSpec {
    /// Materializes the pairwise loss, resolving the percentile reference
    /// CDF against the configured true prior.
    pub fn to_loss(&self, true_prior: &PriorSpec) -> Result<PairwiseLoss> {
        Ok(match self {
            Self::HingeDiff => PairwiseLoss::HingeDiff,
            Self::ZeroOne => PairwiseLoss::ZeroOne,
            Self::PerTruePrior => PairwiseLoss::per_from_prior(true_prior)?,
            Self::PValue { theta0 } => PairwiseLoss::PValue { theta0: *theta0 },
        })
    }
}

/// Full description of a sweep experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub true_prior: PriorSpec,
    pub estimating_prior: EstimatingPrior,
    pub error: ErrorModel,
    pub sigma_law: SigmaLaw,
    pub p_schedule: Vec<usize>,
    pub rankers: Vec<RankerKind>,
    pub eval_loss: LossSpec,
    pub scaling: ScalingRule,
    pub replicates: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Checks structural invariants and re-validates parameters that may
    /// have bypassed constructors during deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.p_schedule.is_empty() {
            return Err(Error::Config("p_schedule must be nonempty".into()));
        }
        if self.p_schedule[0] < 2 {
            return Err(Error::Config("instance sizes must be ≥ 2".into()));
        }
        if !self.p_schedule.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(
                "p_schedule must be strictly increasing".into(),
            ));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be ≥ 1".into()));
        }
        if self.rankers.is_empty() {
            return Err(Error::Config("at least one ranker is required".into()));
        }
        revalidate_prior(&self.true_prior)?;
        if !self.true_prior.is_proper() {
            return Err(Error::Config(
                "the true prior must be proper (it generates the latent values)".into(),
            ));
        }
        if let EstimatingPrior::Fixed(prior) = &self.estimating_prior {
            revalidate_prior(prior)?;
        }
        revalidate_sigma_law(&self.sigma_law)?;
        for kind in &self.rankers {
            kind.bind(&PriorSpec::UniformImproper).validate()?;
        }
        if let LossSpec::PValue { theta0 } = &self.eval_loss {
            if !theta0.is_finite() {
                return Err(Error::Config("p-value loss needs a finite theta0".into()));
            }
        }
        Ok(())
    }
}

fn revalidate_prior(prior: &PriorSpec) -> Result<()> {
    match prior {
        PriorSpec::Normal { mean, var } => PriorSpec::normal(*mean, *var).map(|_| ()),
        PriorSpec::Pareto { theta_min, alpha } => PriorSpec::pareto(*theta_min, *alpha).map(|_| ()),
        PriorSpec::AbsExp | PriorSpec::SuperLight | PriorSpec::UniformImproper => Ok(()),
    }
}

fn revalidate_sigma_law(law: &SigmaLaw) -> Result<()> {
    match law {
        SigmaLaw::Constant { sigma } => SigmaLaw::constant(*sigma).map(|_| ()),
        SigmaLaw::ZeroExpMixture { v } => SigmaLaw::zero_exp_mixture(*v).map(|_| ()),
        SigmaLaw::Schedule { .. } => Ok(()),
    }
}

// ======================================================================
// Instance generation
// ======================================================================

/// RNG purposes: one independent stream per (replicate, stage, purpose).
const PURPOSE_INSTANCE: u64 = 0;
const PURPOSE_RANKER_BASE: u64 = 2;

fn trial_rng(seed: u64, replicate: usize, stage: usize, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((replicate as u64) << 24) | ((stage as u64) << 8) | purpose);
    rng
}

/// Draws one synthetic instance at size `p`: latent values from the true
/// prior, error scales from the σ law resolved at stage `p`, and
/// observations from the error model (exact when σ = 0).
pub fn generate_instance<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    p: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<UnitData>)> {
    if p < 2 {
        return Err(Error::Domain(format!("instances need p ≥ 2, got {p}")));
    }
    let theta = cfg.true_prior.sample(rng, p)?;
    let law = cfg.sigma_law.at_stage(p)?;
    let sigmas = law.sample(rng, p)?;
    let mut units = Vec::with_capacity(p);
    for (id, (&t, &s)) in theta.iter().zip(&sigmas).enumerate() {
        let x = if s == 0.0 {
            t
        } else {
            t + cfg.error.sample(rng, s, 1)?[0]
        };
        units.push(UnitData::new(x, s, id)?);
    }
    Ok((theta, units))
}

/// Fits a normal prior to observed units: mean of `x`, and the sample
/// variance of `x` minus the mean of `σ²` (floored at 1e−6) — observation
/// noise inflates raw variance by exactly the mean error variance.
pub fn empirical_moments_prior(units: &[UnitData]) -> Result<PriorSpec> {
    if units.len() < 2 {
        return Err(Error::Domain(
            "empirical moments need at least two units".into(),
        ));
    }
    let n = units.len() as f64;
    let mean = units.iter().map(|u| u.x).sum::<f64>() / n;
    let raw_var = units
        .iter()
        .map(|u| (u.x - mean) * (u.x - mean))
        .sum::<f64>()
        / (n - 1.0);
    let noise = units.iter().map(|u| u.sigma * u.sigma).sum::<f64>() / n;
    PriorSpec::normal(mean, (raw_var - noise).max(1e-6))
}

/// Exact scan for the misranked pairs of a ranking against the latent
/// values: returns their count and the summed latent gaps `Σ (θ_j − θ_i)`
/// over pairs ranked `i` before `j` despite `θ_i < θ_j`.
pub fn misranked_set(perm: &Ranking, theta: &[f64]) -> Result<(u64, f64)> {
    if perm.len() != theta.len() {
        return Err(Error::Domain(format!(
            "ranking covers {} units but {} latent values were given",
            perm.len(),
            theta.len()
        )));
    }
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("latent values must be finite".into()));
    }
    let order = perm.order();
    let mut count = 0u64;
    let mut gap = 0.0f64;
    for k1 in 0..order.len() {
        let ti = theta[order[k1]];
        for &u2 in &order[k1 + 1..] {
            let tj = theta[u2];
            if ti < tj {
                count += 1;
                gap += tj - ti;
            }
        }
    }
    Ok((count, gap))
}

// ======================================================================
// Sweeps
// ======================================================================

/// One ranker run on one generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub p: usize,
    pub ranker: &'static str,
    pub loss: f64,
    pub misranked_pairs: u64,
    pub weighted_gap: f64,
    pub replicate: usize,
}

/// A mean with its standard error over replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub mean: f64,
    pub std_error: f64,
}

fn cell_stats(values: &[f64]) -> CellStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    CellStats { mean, std_error }
}

/// Aggregated results for one (instance size, ranker) cell: the evaluated
/// loss, the scaled misranked-pair count `s(p)·|M_p|`, and the scaled
/// latent-gap sum `s(p)·Σ(θ_j − θ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportCell {
    pub p: usize,
    pub ranker: &'static str,
    pub loss: CellStats,
    pub scaled_pairs: CellStats,
    pub scaled_gap: CellStats,
    pub replicates: usize,
}

/// Aggregated sweep results, ordered by (p, ranker).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub seed: u64,
    pub cells: Vec<ReportCell>,
    /// Replicates dropped because a posterior computation failed.
    pub aborted_replicates: usize,
}

impl SweepReport {
    /// The cell for a given instance size and ranker label, if present.
    pub fn cell(&self, p: usize, ranker: &str) -> Option<&ReportCell> {
        self.cells.iter().find(|c| c.p == p && c.ranker == ranker)
    }
}

/// Runs the full sweep: for every replicate and every scheduled size,
/// generates an instance, resolves the estimating prior, runs each ranker
/// on the shared instance, and aggregates by (size, ranker). Deterministic
/// given the config (replicates run on derived RNG streams and reduce in
/// replicate order).
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let outcomes: Vec<Result<Vec<TrialResult>>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| run_replicate(cfg, rep))
        .collect();

    let mut trials = Vec::new();
    let mut aborted = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(mut rows) => trials.append(&mut rows),
            Err(Error::DegeneratePosterior(_)) | Err(Error::Accuracy(_)) => aborted += 1,
            Err(e) => return Err(e),
        }
    }

    let mut grouped: BTreeMap<(usize, &'static str), Vec<&TrialResult>> = BTreeMap::new();
    for t in &trials {
        grouped.entry((t.p, t.ranker)).or_default().push(t);
    }
    let mut cells = Vec::with_capacity(grouped.len());
    for ((p, ranker), rows) in grouped {
        let factor = cfg.scaling.factor(p)?;
        let losses: Vec<f64> = rows.iter().map(|t| t.loss).collect();
        let pairs: Vec<f64> = rows
            .iter()
            .map(|t| t.misranked_pairs as f64 * factor)
            .collect();
        let gaps: Vec<f64> = rows.iter().map(|t| t.weighted_gap * factor).collect();
        cells.push(ReportCell {
            p,
            ranker,
            loss: cell_stats(&losses),
            scaled_pairs: cell_stats(&pairs),
            scaled_gap: cell_stats(&gaps),
            replicates: rows.len(),
        });
    }
    Ok(SweepReport {
        seed: cfg.seed,
        cells,
        aborted_replicates: aborted,
    })
}

fn run_replicate(cfg: &ExperimentConfig, rep: usize) -> Result<Vec<TrialResult>> {
    let eval_loss = cfg.eval_loss.to_loss(&cfg.true_prior)?;
    let mut out = Vec::with_capacity(cfg.p_schedule.len() * cfg.rankers.len());
    for (stage, &p) in cfg.p_schedule.iter().enumerate() {
        let mut rng = trial_rng(cfg.seed, rep, stage, PURPOSE_INSTANCE);
        let (theta, units) = generate_instance(cfg, p, &mut rng)?;
        let est_prior = match &cfg.estimating_prior {
            EstimatingPrior::Fixed(prior) => prior.clone(),
            EstimatingPrior::Rule(EstimatorRule::EmpiricalMomentsNormal) => {
                empirical_moments_prior(&units)?
            }
        };
        for (k, kind) in cfg.rankers.iter().enumerate() {
            let spec = kind.bind(&est_prior);
            let mut ranker_rng = trial_rng(cfg.seed, rep, stage, PURPOSE_RANKER_BASE + k as u64);
            let ranking = run_ranker(&spec, &units, &cfg.error, &mut ranker_rng)?;
            let loss = additive_loss(&ranking, &theta, &eval_loss, &cfg.scaling)?;
            let (misranked_pairs, weighted_gap) = misranked_set(&ranking, &theta)?;
            out.push(TrialResult {
                p,
                ranker: kind.label(),
                loss,
                misranked_pairs,
                weighted_gap,
                replicate: rep,
            });
        }
    }
    Ok(out)
}

// ======================================================================
// Consistency-condition diagnostics
// ======================================================================

/// Which reading of the consistency condition's σ moment to use: the cube
/// root of the mean scale, or the mean of the cube-rooted scale. The two
/// coincide for constant σ laws and differ for mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionReading {
    CubeRootOfMean,
    MeanOfCubeRoot,
}

impl ConditionReading {
    /// Label written next to reported condition values (ASCII so it can
    /// serve as a CSV metric name).
    pub fn label(&self) -> &'static str {
        match self {
            Self::CubeRootOfMean => "s(p)*p^2*E(sigma)^(1/3)",
            Self::MeanOfCubeRoot => "s(p)*p^2*E(sigma^(1/3))",
        }
    }
}

/// Evaluates the consistency-condition value `s(p)·p²·(σ moment)` at stage
/// `p` for the given σ law, under either reading. A vanishing sequence
/// certifies consistency of every ranking method in the theorem's regime.
pub fn consistency_condition_value(
    law: &SigmaLaw,
    p: usize,
    scaling: &ScalingRule,
    reading: ConditionReading,
) -> Result<f64> {
    let resolved = law.at_stage(p)?;
    let moment = match (&resolved, reading) {
        (SigmaLaw::Constant { sigma }, _) => sigma.cbrt(),
        (SigmaLaw::ZeroExpMixture { v }, ConditionReading::CubeRootOfMean) => (0.5 * v).cbrt(),
        (SigmaLaw::ZeroExpMixture { v }, ConditionReading::MeanOfCubeRoot) => {
            // E(σ^{1/3}) = ½ Γ(4/3) v^{1/3} for the zero–exponential mixture
            0.5 * libm::tgamma(4.0 / 3.0) * v.cbrt()
        }
        (SigmaLaw::Schedule { .. }, _) => unreachable!("at_stage resolves schedules"),
    };
    Ok(scaling.factor(p)? * (p * p) as f64 * moment)
}

// ======================================================================
// Presets
// ======================================================================

/// Consistent regime: normal truth, empirically fitted normal prior,
/// normal errors with σ = 1/p. The condition value `s(p)·p²·E(σ)^{1/3}`
/// equals `p^{−1/3}` and vanishes, so every ranker's per-pair loss decays.
pub fn preset_consistent() -> ExperimentConfig {
    ExperimentConfig {
        true_prior: PriorSpec::Normal {
            mean: 0.0,
            var: 1.0,
        },
        estimating_prior: EstimatingPrior::Rule(EstimatorRule::EmpiricalMomentsNormal),
        error: ErrorModel::NormalErr,
        sigma_law: SigmaLaw::Schedule {
            rule: crate::distributions::ScheduleRule::ConstantInvP,
        },
        p_schedule: vec![25, 50, 100, 200, 400],
        rankers: vec![
            RankerKind::Value,
            RankerKind::PosteriorMean,
            RankerKind::PerRank,
        ],
        eval_loss: LossSpec::HingeDiff,
        scaling: ScalingRule::PerPair,
        replicates: 200,
        seed: 1729,
    }
}

/// Heavy-tailed-error counterexample: Pareto(1,4) truth, fixed normal
/// estimating prior, quartic-tailed errors, σ zero half the time and
/// exponential with mean p^{−1/2} otherwise. Posterior-mean ranking's
/// per-unit loss stops decaying while value ranking keeps improving.
pub fn preset_counterexample_quartic() -> ExperimentConfig {
    ExperimentConfig {
        true_prior: PriorSpec::Pareto {
            theta_min: 1.0,
            alpha: 4.0,
        },
        estimating_prior: EstimatingPrior::Fixed(PriorSpec::Normal {
            mean: 1.25,
            var: 2.0 / 9.0,
        }),
        error: ErrorModel::QuarticErr,
        sigma_law: SigmaLaw::Schedule {
            rule: crate::distributions::ScheduleRule::ZeroExpInvSqrtP,
        },
        p_schedule: vec![50, 100, 200, 400, 800],
        rankers: vec![RankerKind::Value, RankerKind::PosteriorMean],
        eval_loss: LossSpec::ZeroOne,
        scaling: ScalingRule::PerUnit,
        replicates: 200,
        seed: 2857,
    }
}

/// Light-tailed-prior counterexample: two-sided gamma truth, very light
/// estimating prior, normal errors, σ zero half the time and exponential
/// with mean `exp(−(ln p)²/32)` otherwise. Posterior-mean ranking's total
/// misranked-pair count keeps growing while value ranking's per-pair loss
/// decays.
pub fn preset_counterexample_superlight() -> ExperimentConfig {
    ExperimentConfig {
        true_prior: PriorSpec::AbsExp,
        estimating_prior: EstimatingPrior::Fixed(PriorSpec::SuperLight),
        error: ErrorModel::NormalErr,
        sigma_law: SigmaLaw::Schedule {
            rule: crate::distributions::ScheduleRule::ZeroExpLogSq,
        },
        p_schedule: vec![50, 100, 200, 400, 800],
        rankers: vec![RankerKind::Value, RankerKind::PosteriorMean],
        eval_loss: LossSpec::ZeroOne,
        scaling: ScalingRule::Total,
        replicates: 200,
        seed: 6174,
    }
}

// ======================================================================
// CSV emission
// ======================================================================

/// Writes the report as CSV with header
/// `p,ranker,metric,mean,std_error,replicates,seed`, one row per
/// (p, ranker, metric ∈ {loss, scaled_gap, scaled_pairs}), sorted by
/// (p, ranker, metric), numbers in 17-significant-digit scientific form.
pub fn emit_csv(report: &SweepReport, path: &Path) -> Result<()> {
    let mut cells: Vec<&ReportCell> = report.cells.iter().collect();
    cells.sort_by(|a, b| a.p.cmp(&b.p).then_with(|| a.ranker.cmp(b.ranker)));
    let mut out = String::from("p,ranker,metric,mean,std_error,replicates,seed\n");
    for cell in cells {
        // metric names in sorted order
        for (metric, stats) in [
            ("loss", &cell.loss),
            ("scaled_gap", &cell.scaled_gap),
            ("scaled_pairs", &cell.scaled_pairs),
        ] {
            out.push_str(&format!(
                "{},{},{},{:.16e},{:.16e},{},{}\n",
                cell.p,
                cell.ranker,
                metric,
                stats.mean,
                stats.std_error,
                cell.replicates,
                report.seed
            ));
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

// ======================================================================
