//! A laboratory for empirical-Bayes ranking estimators.
//!
//! The crate models the following setting: `p` units carry latent quantities
//! `θ_i`, observed through noisy point estimates `x_i` with known error
//! scales `σ_i`. A *ranking* assigns each unit a position, lower positions
//! claiming larger latent values. The modules here provide
//!
//! * [`distributions`] — priors, observation-error models, and error-scale
//!   laws, plus structural checks on prior shapes (quasiunimodality,
//!   tail domination);
//! * [`posterior`] — numeric posteriors on quadrature grids, with exact
//!   conjugate references, pairwise comparison probabilities, and sampling;
//! * [`losses`] — pairwise loss functions, additive ranking losses, the
//!   footrule/inversion metrics and their sandwich relation, and numeric
//!   checks of several expected-loss bounds;
//! * [`rankers`] — five ranking strategies, from plain value sorting to a
//!   minimum-expected-footrule assignment;
//! * [`oracle`] — Monte Carlo loss estimation and a brute-force expected-loss
//!   minimizer for small instances;
//! * [`harness`] — seeded sweep experiments over growing instance sizes,
//!   with CSV reporting and ready-made experiment presets;
//! * [`checks`] — the named verification suites exposed by the CLI.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also rejects NaN, which must never pass a domain check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod assignment;
pub mod checks;
pub mod distributions;
pub mod harness;
pub mod losses;
pub mod oracle;
pub mod posterior;
pub mod quad;
pub mod rankers;

pub use distributions::{ErrorModel, PriorSpec, SigmaLaw};
pub use harness::{ExperimentConfig, SweepReport};
pub use losses::{PairwiseLoss, Ranking, ScalingRule};
pub use posterior::{LikelihoodPosterior, PosteriorGrid};
pub use rankers::{RankerSpec, UnitData};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A distribution or operation received a parameter outside its domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// A posterior carries no mass on any searchable window.
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),
    /// Quadrature failed to reach the requested accuracy within its budget.
    #[error("quadrature accuracy failure: {0}")]
    Accuracy(String),
    /// An operation was asked to exceed a hard size limit.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    /// A configuration file or value was invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Filesystem or formatting failure while writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
