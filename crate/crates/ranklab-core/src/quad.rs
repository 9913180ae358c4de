//! One-dimensional quadrature primitives.
//!
//! Two tools live here: a classic adaptive Simpson integrator with interval
//! bisection for scalar integrals, and a uniform composite Simpson rule that
//! hands back its nodes and weights so callers can keep the evaluations
//! (the posterior grids are built that way).

use crate::{Error, Result};

/// Integrates `f` over `[a, b]` by adaptive Simpson bisection.
///
/// Subintervals are bisected until the Richardson estimate of the local
/// error drops below the local share of `tol` (the usual `15·tol` test),
/// down to a maximum bisection depth of 60. Exceeding the depth on any
/// subinterval is an accuracy failure.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds [{a}, {b}] must be finite"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    if a == b {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (m <= a || b <= m) {
        // Second disjunct: the interval has collapsed to adjacent floats.
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Accuracy(format!(
            "adaptive Simpson hit max depth on [{a}, {b}] (residual {delta:.3e})"
        )));
    }
    let lv = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let rv = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(lv + rv)
}

/// Nodes and weights of the composite Simpson rule with `panels` panels
/// (so `2·panels + 1` nodes) over `[lo, hi]`. `panels ≥ 1`.
///
/// The weights are all positive and sum to `hi − lo`.
pub fn composite_simpson(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(panels >= 1, "composite Simpson needs at least one panel");
    let n = 2 * panels;
    let h = (hi - lo) / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for i in 0..=n {
        // Recompute from the endpoints so the last node lands on `hi` exactly.
        let t = i as f64 / n as f64;
        nodes.push(lo * (1.0 - t) + hi * t);
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        weights.push(w * h / 3.0);
    }
    (nodes, weights)
}
