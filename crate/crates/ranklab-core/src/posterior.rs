//! Per-unit posteriors on quadrature grids.
//!
//! A posterior for `Θ | (x, σ)` is represented by [`PosteriorGrid`]: sorted
//! nodes, positive quadrature weights, and normalized density values with
//! `Σ wᵢ·vᵢ = 1` by construction. Everything runs in log space so that
//! extremely peaked or far-displaced posteriors (σ down to 10⁻³, modes far
//! from the observation) normalize without underflow.
//!
//! Two integration charts are used. Gaussian errors integrate directly in θ
//! over a window that starts at `x ± 12σ` (intersected with the prior
//! support) and doubles outward while an endpoint still carries relative
//! density above `tol`; the window is then trimmed back to where density is
//! numerically relevant. Quartic errors have polynomial tails that defeat
//! any fixed truncation, so they integrate in `u = arctan((θ−x)/σ)`, which
//! compactifies the axis and turns the tails into smooth bounded integrands.
//! In both charts the panel count starts from an estimate of the narrowest
//! posterior feature (likelihood scale combined with prior log-curvature)
//! and doubles until mean, variance, and total mass stop moving — seeding by
//! feature size prevents the false convergence a coarse grid would report on
//! a spike it never sampled.

use rand::Rng;

use crate::distributions::{ErrorModel, PriorSpec};
use crate::quad::composite_simpson;
use crate::{Error, Result};

/// Default relative truncation/refinement tolerance for posterior builds.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Hard cap on quadrature panels per posterior (2¹⁷ panels = 262 145 nodes).
const MAX_PANELS: usize = 1 << 17;

/// Number of probe points used when scanning a window for its density
/// profile (window location, trimming, and the normalization anchor).
const SCAN_POINTS: usize = 513;

/// A posterior distribution tabulated on a quadrature grid.
///
/// `Σ weights·values = 1` holds by construction. A point mass (exact
/// observation, σ = 0) is a one-node grid.
#[derive(Debug, Clone)]
pub struct PosteriorGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    /// Trapezoid cumulative mass at the nodes, rescaled to end at exactly 1.
    cum: Vec<f64>,
    /// Reciprocal of the raw trapezoid total, converting unscaled segment
    /// masses into normalized CDF units.
    cum_scale: f64,
    mean: f64,
    variance: f64,
    log_norm_const: f64,
}

/// A posterior under the improper flat prior — the error law recentred on
/// the observation. Same representation, same invariants.
pub type LikelihoodPosterior = PosteriorGrid;

impl PosteriorGrid {
    /// Sorted quadrature nodes.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights (positive; they sum to the window width).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Normalized posterior density at the nodes.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Posterior mean.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Posterior variance (≥ 0).
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Log of the normalizing constant `∫ π(θ)·L(x | θ, σ) dθ` — the
    /// evidence of the observation (−∞ for a point mass sitting on a prior
    /// density zero).
    pub fn log_norm_const(&self) -> f64 {
        self.log_norm_const
    }

    /// Whether this is a degenerate point-mass grid (σ = 0).
    pub fn is_point_mass(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Number of grid nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the grid is empty (never produced by the constructors).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn point_mass(x: f64, log_norm_const: f64) -> Self {
        Self {
            nodes: vec![x],
            weights: vec![1.0],
            values: vec![1.0],
            cum: vec![1.0],
            cum_scale: 1.0,
            mean: x,
            variance: 0.0,
            log_norm_const,
        }
    }

    /// Builds the grid from θ-space nodes, effective θ-space weights, and
    /// *log* unnormalized θ-densities, normalizing via a max shift.
    fn from_log_values(nodes: Vec<f64>, weights: Vec<f64>, log_dens: &[f64]) -> Result<Self> {
        let m = log_dens.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY || m.is_nan() {
            return Err(Error::DegeneratePosterior(
                "posterior carries no mass on the integration window".into(),
            ));
        }
        let raw: Vec<f64> = log_dens.iter().map(|l| (l - m).exp()).collect();
        let mass: f64 = raw.iter().zip(&weights).map(|(v, w)| v * w).sum();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::DegeneratePosterior(format!(
                "posterior mass on the window is not positive and finite (got {mass})"
            )));
        }
        let values: Vec<f64> = raw.iter().map(|v| v / mass).collect();
        let mean: f64 = nodes
            .iter()
            .zip(weights.iter().zip(&values))
            .map(|(t, (w, v))| t * w * v)
            .sum();
        let variance: f64 = nodes
            .iter()
            .zip(weights.iter().zip(&values))
            .map(|(t, (w, v))| {
                let d = t - mean;
                w * (v * d * d)
            })
            .sum::<f64>()
            .max(0.0);
        let (cum, total) = trapezoid_cumulative(&nodes, &values);
        Ok(Self {
            nodes,
            weights,
            values,
            cum,
            cum_scale: 1.0 / total,
            mean,
            variance,
            log_norm_const: m + mass.ln(),
        })
    }

    /// `P(Θ ≤ t)` by piecewise-quadratic interpolation of the tabulated
    /// density (point masses step at their node).
    pub fn cdf(&self, t: f64) -> f64 {
        if self.is_point_mass() {
            return if t >= self.nodes[0] { 1.0 } else { 0.0 };
        }
        let n = self.nodes.len();
        if t <= self.nodes[0] {
            return 0.0;
        }
        if t >= self.nodes[n - 1] {
            return 1.0;
        }
        let k = self.nodes.partition_point(|x| *x <= t).saturating_sub(1);
        let k = k.min(n - 2);
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let (va, vb) = (self.values[k], self.values[k + 1]);
        let h = b - a;
        let s = t - a;
        let seg = if h > 0.0 {
            va * s + 0.5 * (vb - va) / h * s * s
        } else {
            0.0
        };
        (self.cum[k] + seg * self.cum_scale).clamp(0.0, 1.0)
    }

    /// Inverse-CDF sampling with interpolation inside grid cells; a seeded
    /// rng makes the sequence reproducible. Point masses return the node.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile(rng.random::<f64>())).collect()
    }

    /// Quantile function, the inverse of [`PosteriorGrid::cdf`].
    pub fn quantile(&self, u: f64) -> f64 {
        if self.is_point_mass() {
            return self.nodes[0];
        }
        let u = u.clamp(0.0, 1.0);
        let k = self
            .cum
            .partition_point(|c| *c <= u)
            .saturating_sub(1)
            .min(self.nodes.len() - 2);
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let (va, vb) = (self.values[k], self.values[k + 1]);
        let h = b - a;
        if !(h > 0.0) {
            return a;
        }
        // target mass inside the segment, in raw density units
        let m = (u - self.cum[k]).max(0.0) / self.cum_scale;
        let c = (vb - va) / h; // density slope across the segment
        let s = if c.abs() * h <= 1e-12 * (va + vb) || (va <= 0.0 && vb <= 0.0) {
            if va > 0.0 {
                m / va
            } else {
                0.5 * h
            }
        } else {
            // solve va·s + c·s²/2 = m with the cancellation-free root
            let disc = (va * va + 2.0 * c * m).max(0.0).sqrt();
            if va + disc > 0.0 {
                2.0 * m / (va + disc)
            } else {
                h
            }
        };
        (a + s.clamp(0.0, h)).min(b)
    }
}

/// Trapezoid cumulative of a tabulated density; returns the per-node
/// cumulative rescaled to end at exactly one, plus the raw total.
fn trapezoid_cumulative(nodes: &[f64], values: &[f64]) -> (Vec<f64>, f64) {
    let n = nodes.len();
    let mut cum = Vec::with_capacity(n);
    cum.push(0.0);
    let mut acc = 0.0;
    for i in 1..n {
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
        cum.push(acc);
    }
    if acc > 0.0 {
        for c in &mut cum {
            *c /= acc;
        }
        (cum, acc)
    } else {
        let last = n - 1;
        cum[last] = 1.0;
        (cum, 1.0)
    }
}

// ======================================================================
// Builders
// ======================================================================

/// Exact Gaussian-conjugate posterior moments for prior `N(mu, tau2)` and
/// error `N(0, sigma²)`: the reference the quadrature engine is validated
/// against.
pub fn conjugate_normal_posterior(mu: f64, tau2: f64, x: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(tau2 > 0.0) || !(sigma > 0.0) || !mu.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!(
            "conjugate posterior needs tau2 > 0 and sigma > 0, got ({mu}, {tau2}, {x}, {sigma})"
        )));
    }
    let prec = 1.0 / tau2 + 1.0 / (sigma * sigma);
    let var = 1.0 / prec;
    let mean = (x / (sigma * sigma) + mu / tau2) * var;
    Ok((mean, var))
}

/// Posterior of `Θ | (x, σ)` under `prior` with the given error model.
///
/// `sigma = 0` yields the point mass at `x` (the observation is exact);
/// `x` must then lie in the prior support. `tol` controls both window
/// truncation and grid-refinement convergence.
pub fn posterior(
    prior: &PriorSpec,
    error: &ErrorModel,
    x: f64,
    sigma: f64,
    tol: f64,
) -> Result<PosteriorGrid> {
    if !x.is_finite() || !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "posterior needs finite x and sigma ≥ 0, got ({x}, {sigma})"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tol must be in (0,1), got {tol}")));
    }
    if sigma == 0.0 {
        let (lo, hi) = prior.support();
        if x < lo || x > hi {
            return Err(Error::DegeneratePosterior(format!(
                "exact observation {x} lies outside the prior support [{lo}, {hi}]"
            )));
        }
        return Ok(PosteriorGrid::point_mass(x, prior.log_density(x)));
    }
    match error {
        ErrorModel::NormalErr => build_theta_space(prior, error, x, sigma, tol),
        ErrorModel::QuarticErr => build_arctan_space(prior, error, x, sigma, tol),
    }
}

/// Posterior under the improper flat prior: for symmetric location-family
/// errors this is the error law recentred at `x`, scaled by `σ`.
pub fn likelihood_posterior(
    error: &ErrorModel,
    x: f64,
    sigma: f64,
    tol: f64,
) -> Result<LikelihoodPosterior> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!(
            "likelihood posterior needs sigma > 0, got {sigma}"
        )));
    }
    posterior(&PriorSpec::UniformImproper, error, x, sigma, tol)
}

/// Log unnormalized posterior density in θ.
fn log_post(prior: &PriorSpec, error: &ErrorModel, x: f64, sigma: f64, theta: f64) -> f64 {
    prior.log_density(theta) + error.std_log_density((x - theta) / sigma) - sigma.ln()
}

/// Direct θ-space integration for light-tailed (Gaussian) errors.
fn build_theta_space(
    prior: &PriorSpec,
    error: &ErrorModel,
    x: f64,
    sigma: f64,
    tol: f64,
) -> Result<PosteriorGrid> {
    let (slo, shi) = prior.support();
    let mut lo = (x - 12.0 * sigma).max(slo);
    let mut hi = (x + 12.0 * sigma).min(shi);
    if !(lo < hi) {
        // likelihood window disjoint from the support: hug the nearer edge
        if x <= slo {
            lo = slo;
            hi = (slo + 24.0 * sigma).min(shi);
        } else {
            hi = shi;
            lo = (shi - 24.0 * sigma).max(slo);
        }
        if !(lo < hi) {
            return Err(Error::DegeneratePosterior(
                "prior support has zero width".into(),
            ));
        }
    }

    let f = |theta: f64| log_post(prior, error, x, sigma, theta);
    let log_tol = tol.ln();

    // Expand: an endpoint with density within tol of the window max means
    // mass is being cut off (or the mode lies outside) — grow that side.
    let mut scan = scan_window(&f, prior, x, lo, hi);
    for _ in 0..64 {
        let max = scan.max;
        if max == f64::NEG_INFINITY {
            return Err(Error::DegeneratePosterior(
                "posterior density vanishes on every probed window".into(),
            ));
        }
        let width = hi - lo;
        let grow_left = scan.first > max + log_tol && lo > slo;
        let grow_right = scan.last > max + log_tol && hi < shi;
        if !grow_left && !grow_right {
            break;
        }
        if grow_left {
            lo = (lo - width).max(slo);
        }
        if grow_right {
            hi = (hi + width).min(shi);
        }
        scan = scan_window(&f, prior, x, lo, hi);
    }
    if scan.max == f64::NEG_INFINITY {
        return Err(Error::DegeneratePosterior(
            "posterior density vanishes on every probed window".into(),
        ));
    }

    // Trim: drop dead zones beyond any numerically relevant contribution.
    let cut = scan.max - (1.0 / tol).ln() - 23.0;
    let (tlo, thi) = scan.trimmed_window(cut, lo, hi);
    let (lo, hi) = ((tlo).max(slo), (thi).min(shi));

    // Feature size: the narrowest structure the posterior can carry.
    let curv = prior.curvature_bound(lo, hi);
    let feature = 1.0 / (1.0 / (sigma * sigma) + curv).sqrt();
    let segments = split_at_kinks(lo, hi, &prior.kink_points());
    refine_on_window(&segments, feature, tol, f, |theta| theta, |_| 1.0)
}

/// Splits `[lo, hi]` at interior non-smooth points of the prior so each
/// quadrature segment is a smooth integrand.
fn split_at_kinks(lo: f64, hi: f64, kinks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = kinks
        .iter()
        .copied()
        .filter(|k| *k > lo && *k < hi)
        .collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut segs = Vec::with_capacity(cuts.len() + 1);
    let mut start = lo;
    for c in cuts {
        segs.push((start, c));
        start = c;
    }
    segs.push((start, hi));
    segs
}

/// Arctan-chart integration for polynomial-tailed (quartic) errors:
/// `θ = x + σ·tan(u)` maps the axis onto `(−π/2, π/2)`.
fn build_arctan_space(
    prior: &PriorSpec,
    error: &ErrorModel,
    x: f64,
    sigma: f64,
    tol: f64,
) -> Result<PosteriorGrid> {
    let (slo, shi) = prior.support();
    let u_of = |theta: f64| ((theta - x) / sigma).atan();
    let ulo = if slo == f64::NEG_INFINITY {
        -std::f64::consts::FRAC_PI_2
    } else {
        u_of(slo)
    };
    let uhi = if shi == f64::INFINITY {
        std::f64::consts::FRAC_PI_2
    } else {
        u_of(shi)
    };
    if !(ulo < uhi) {
        return Err(Error::DegeneratePosterior(
            "prior support has zero width".into(),
        ));
    }

    let theta_of = |u: f64| x + sigma * u.tan();
    let jac = |u: f64| {
        let t = u.tan();
        sigma * (1.0 + t * t)
    };
    let log_ftheta = |u: f64| log_post(prior, error, x, sigma, theta_of(u));
    // full u-space integrand (θ-density times Jacobian) drives the scan
    let log_g = |u: f64| log_ftheta(u) + jac(u).ln();

    // Scan in u to locate the mass, trim dead zones (no expansion needed —
    // the chart is already compact).
    let scan = scan_window_u(&log_g, prior, x, sigma, ulo, uhi);
    if scan.max == f64::NEG_INFINITY {
        return Err(Error::DegeneratePosterior(
            "posterior density vanishes on every probed window".into(),
        ));
    }
    let cut = scan.max - (1.0 / tol).ln() - 23.0;
    let (tlo, thi) = scan.trimmed_window(cut, ulo, uhi);

    // Feature size transported to the u chart at the scanned mode.
    let theta_star = theta_of(scan.argmax);
    let curv = prior.curvature_bound(
        theta_star - 6.0 * sigma.max(1e-12),
        theta_star + 6.0 * sigma.max(1e-12),
    );
    let feature_theta = 1.0 / (1.0 / (sigma * sigma) + curv).sqrt();
    let dist2 = (theta_star - x) * (theta_star - x);
    let du_dtheta = sigma / (sigma * sigma + dist2);
    let feature_u = (feature_theta * du_dtheta).min(0.35);

    let u_kinks: Vec<f64> = prior
        .kink_points()
        .into_iter()
        .map(|k| ((k - x) / sigma).atan())
        .collect();
    let segments = split_at_kinks(tlo, thi, &u_kinks);
    refine_on_window(&segments, feature_u, tol, log_ftheta, theta_of, jac)
}

/// Density profile of a window from a uniform probe grid plus the prior's
/// landmark points.
struct WindowScan {
    points: Vec<f64>,
    logs: Vec<f64>,
    max: f64,
    argmax: f64,
    first: f64,
    last: f64,
}

impl WindowScan {
    /// Smallest sub-window containing every probe with log-density above
    /// `cut`, padded by one probe step and clamped to `[lo, hi]`.
    fn trimmed_window(&self, cut: f64, lo: f64, hi: f64) -> (f64, f64) {
        let mut tlo = f64::INFINITY;
        let mut thi = f64::NEG_INFINITY;
        for (p, l) in self.points.iter().zip(&self.logs) {
            if *l >= cut {
                tlo = tlo.min(*p);
                thi = thi.max(*p);
            }
        }
        if !(tlo <= thi) {
            return (lo, hi);
        }
        let step = (hi - lo) / (SCAN_POINTS as f64 - 1.0);
        ((tlo - step).max(lo), (thi + step).min(hi))
    }
}

fn scan_with_extras(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, extras: &[f64]) -> WindowScan {
    let mut points: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS as f64 - 1.0))
        .collect();
    points.extend(extras.iter().copied().filter(|p| *p > lo && *p < hi));
    points.sort_by(|a, b| a.total_cmp(b));
    let logs: Vec<f64> = points.iter().map(|p| f(*p)).collect();
    let mut max = f64::NEG_INFINITY;
    let mut argmax = points[0];
    for (p, l) in points.iter().zip(&logs) {
        if *l > max {
            max = *l;
            argmax = *p;
        }
    }
    WindowScan {
        first: logs[0],
        last: *logs.last().unwrap(),
        points,
        logs,
        max,
        argmax,
    }
}

fn scan_window(f: &dyn Fn(f64) -> f64, prior: &PriorSpec, x: f64, lo: f64, hi: f64) -> WindowScan {
    let mut extras = prior.probe_points();
    extras.push(x);
    scan_with_extras(f, lo, hi, &extras)
}

fn scan_window_u(
    f: &dyn Fn(f64) -> f64,
    prior: &PriorSpec,
    x: f64,
    sigma: f64,
    ulo: f64,
    uhi: f64,
) -> WindowScan {
    let extras: Vec<f64> = prior
        .probe_points()
        .into_iter()
        .chain(std::iter::once(x))
        .map(|t| ((t - x) / sigma).atan())
        .collect();
    scan_with_extras(f, ulo, uhi, &extras)
}

/// Composite-Simpson refinement over fixed chart segments: panel counts are
/// seeded by the feature estimate and doubled until mean, variance, and
/// mass settle. `log_ftheta` is the log θ-density at a chart point,
/// `theta_of` maps chart to θ, and `jac` is the analytic `dθ/d(chart)`;
/// the effective θ-space weights are `chart weight × jac`, so the
/// normalization identity `Σ w·v = 1` holds exactly in θ space. Segments
/// are split at prior kink points upstream, keeping each integrand smooth.
fn refine_on_window(
    segments: &[(f64, f64)],
    feature: f64,
    tol: f64,
    log_ftheta: impl Fn(f64) -> f64,
    theta_of: impl Fn(f64) -> f64,
    jac: impl Fn(f64) -> f64,
) -> Result<PosteriorGrid> {
    let span: f64 = segments.iter().map(|(a, b)| b - a).sum();
    let seed = (6.0 * span / feature.max(1e-300)).ceil();
    let mut panels = if seed.is_finite() {
        (seed.max(256.0).min((MAX_PANELS / 4) as f64) as usize).next_power_of_two()
    } else {
        MAX_PANELS / 4
    };
    let conv = tol.max(1e-13);

    let mut prev: Option<PosteriorGrid> = None;
    loop {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut logs = Vec::new();
        for (lo, hi) in segments {
            let seg_panels = (((panels as f64) * (hi - lo) / span).ceil() as usize).max(16);
            let (cnodes, cweights) = composite_simpson(*lo, *hi, seg_panels);
            for (u, w) in cnodes.iter().zip(&cweights) {
                nodes.push(theta_of(*u));
                weights.push(w * jac(*u));
                logs.push(log_ftheta(*u));
            }
        }
        let grid = PosteriorGrid::from_log_values(nodes, weights, &logs)?;
        if let Some(p) = prev {
            let dm = (grid.mean - p.mean).abs();
            let dv = (grid.variance - p.variance).abs();
            let dl = (grid.log_norm_const - p.log_norm_const).abs();
            let ok_mean = dm <= conv * (1.0 + grid.mean.abs());
            let ok_var = dv <= conv * (1.0 + grid.variance);
            let ok_mass = dl <= (conv * 10.0).max(1e-9);
            if ok_mean && ok_var && ok_mass {
                return Ok(grid);
            }
        }
        if panels >= MAX_PANELS {
            return Err(Error::Accuracy(format!(
                "posterior refinement did not settle within {MAX_PANELS} panels over {} segment(s) spanning {span}",
                segments.len()
            )));
        }
        panels *= 2;
        prev = Some(grid);
    }
}

// ======================================================================
// Pairwise comparison
// ======================================================================

/// `P(Θ_a < Θ_b)` for independent posteriors: `∫ F_a(θ) f_b(θ) dθ` evaluated
/// with b's quadrature weights, symmetrized so that
/// `pairwise_less_prob(a,b) + pairwise_less_prob(b,a) = 1` exactly.
/// Coincident point masses split the tie at ½.
pub fn pairwise_less_prob(a: &PosteriorGrid, b: &PosteriorGrid) -> f64 {
    let raw_ab = less_prob_raw(a, b);
    let raw_ba = less_prob_raw(b, a);
    (0.5 * (raw_ab + (1.0 - raw_ba))).clamp(0.0, 1.0)
}

fn less_prob_raw(a: &PosteriorGrid, b: &PosteriorGrid) -> f64 {
    match (a.is_point_mass(), b.is_point_mass()) {
        (true, true) => {
            let (xa, xb) = (a.nodes[0], b.nodes[0]);
            if xa < xb {
                1.0
            } else if xa > xb {
                0.0
            } else {
                0.5
            }
        }
        (true, false) => 1.0 - b.cdf(a.nodes[0]),
        (false, true) => a.cdf(b.nodes[0]),
        (false, false) => {
            // disjoint supports decide the comparison outright (Σ w·v = 1)
            let (a_lo, a_hi) = (a.nodes[0], a.nodes[a.nodes.len() - 1]);
            let (b_lo, b_hi) = (b.nodes[0], b.nodes[b.nodes.len() - 1]);
            if a_hi <= b_lo {
                return 1.0;
            }
            if a_lo >= b_hi {
                return 0.0;
            }
            // ∫ F_a dB via b's Simpson weights; F_a is 0 below and 1 above
            // a's support, so only the overlap needs CDF evaluations
            let start = b.nodes.partition_point(|t| *t <= a_lo);
            let stop = b.nodes.partition_point(|t| *t < a_hi);
            let mut acc = 0.0;
            for k in start..stop {
                acc += b.weights[k] * b.values[k] * a.cdf(b.nodes[k]);
            }
            for k in stop..b.nodes.len() {
                acc += b.weights[k] * b.values[k];
            }
            acc.clamp(0.0, 1.0)
        }
    }
}

// ======================================================================
