//! Special functions and searches backing the closed forms: both real
//! branches of the Lambert W function, integer bisection over monotone
//! predicates, numeric inversion of the resolvable-collision failure
//! probability, and the maximizer of `g(z) = ln(1 + e z) (W_-1(z) + 1)`.

use std::f64::consts::E;

use crate::analytic;
use crate::error::{Error, Result};

/// 1/e, the Lambert branch point is at -1/e.
const INV_E: f64 = 1.0 / E;

const MAX_HALLEY_ITERATIONS: usize = 50;

/// Halley refinement for `w e^w = x`. Cubic convergence; the callers supply
/// branch-appropriate initial guesses. Iterates until the step stalls at
/// machine precision, then verifies the residual contract.
fn halley(x: f64, mut w: f64, rel_scale: f64) -> Result<f64> {
    let tol = 1e-12 * rel_scale;
    for _ in 0..MAX_HALLEY_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w);
        }
        let w1 = w + 1.0;
        // f' = e^w (w + 1), with the second-order Halley correction
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    let resid = (w * w.exp() - x).abs();
    if resid <= tol {
        Ok(w)
    } else {
        Err(Error::Convergence(format!(
            "Halley iteration for W({x}) stalled at w = {w} (residual {resid:.3e})"
        )))
    }
}

/// Series around the branch point `x = -1/e`: `p = +/- sqrt(2 (e x + 1))`,
/// `W = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540`. Positive `p` gives the
/// principal branch, negative `p` the lower branch.
fn branch_point_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))
}

/// Principal branch `W_0(x)` for `x >= -1/e`.
///
/// Satisfies `|W e^W - x| <= 1e-12 * max(1, |x|)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < -INV_E {
        return Err(Error::Domain(format!(
            "lambert_w0 requires x >= -1/e = {:.17}, got {x}",
            -INV_E
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let p2 = (2.0 * (E * x + 1.0)).max(0.0);
    if p2 == 0.0 {
        return Ok(-1.0);
    }
    let guess = if p2 < 0.5 {
        branch_point_series(p2.sqrt())
    } else if x < 1.0 {
        // truncated Maclaurin series x - x^2 + 3/2 x^3
        x * (1.0 - x * (1.0 - 1.5 * x))
    } else if x < 3.0 {
        0.4 + 0.2 * x
    } else {
        // asymptotic: ln x - ln ln x
        let l1 = x.ln();
        l1 - l1.ln()
    };
    halley(x, guess, x.abs().max(1.0))
}

/// Lower branch `W_-1(x)` for `-1/e <= x < 0`.
///
/// Returns `w <= -1` with `w e^w = x` to relative residual `1e-12`. Initial
/// guess from the branch-point series near `-1/e` and from
/// `ln(-x) - ln(-ln(-x))` near zero, refined by Halley iteration.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !x.is_finite() || x < -INV_E || x >= 0.0 {
        return Err(Error::Domain(format!(
            "lambert_wm1 requires -1/e <= x < 0, got {x}"
        )));
    }
    let p2 = (2.0 * (E * x + 1.0)).max(0.0);
    if p2 == 0.0 {
        return Ok(-1.0);
    }
    let guess = if p2 < 1.0 {
        branch_point_series(-p2.sqrt())
    } else {
        // x in [-0.5/e, 0): asymptotic expansion in L1 = ln(-x), L2 = ln(-L1)
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    let w = halley(x, guess, x.abs())?;
    if w > -1.0 + 1e-9 {
        return Err(Error::Internal(format!(
            "lambert_wm1({x}) converged to the wrong branch: w = {w}"
        )));
    }
    Ok(w)
}

/// An integer bracket for a monotone predicate: `pred(lo) = false`,
/// `pred(hi) = true`.
#[derive(Debug, Clone, Copy)]
pub struct BracketedSearch {
    pub lo: u64,
    pub hi: u64,
}

impl BracketedSearch {
    /// Shrink the bracket to width one and return `hi`, the smallest value
    /// where the predicate holds.
    pub fn bisect<E>(
        mut self,
        mut pred: impl FnMut(u64) -> std::result::Result<bool, E>,
    ) -> std::result::Result<u64, E> {
        while self.hi - self.lo > 1 {
            let mid = self.lo + (self.hi - self.lo) / 2;
            if pred(mid)? {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
        Ok(self.hi)
    }
}

/// Smallest `x` in `[start, cap]` satisfying a monotone (false-then-true)
/// predicate: exponential bracket expansion from `start`, then bisection.
/// `Ok(None)` means the predicate is still false at `cap`.
pub fn smallest_true<E>(
    start: u64,
    cap: u64,
    mut pred: impl FnMut(u64) -> std::result::Result<bool, E>,
) -> std::result::Result<Option<u64>, E> {
    if pred(start)? {
        return Ok(Some(start));
    }
    let mut lo = start;
    let mut hi = start;
    loop {
        hi = hi.saturating_mul(2).min(cap);
        if hi == lo {
            return Ok(None); // start == cap and predicate false
        }
        if pred(hi)? {
            break;
        }
        if hi == cap {
            return Ok(None);
        }
        lo = hi;
    }
    BracketedSearch { lo, hi }.bisect(pred).map(Some)
}

/// Upper bound for resource counts produced by searches; beyond this the
/// integer grid of f64 is too coarse to trust a boundary.
pub const MAX_RESOURCE_UNITS: u64 = 1 << 53;

/// Smallest `n_ru >= n` with failure probability at most `pf_target` for the
/// given receiver capability, found by numeric inversion. Covers every
/// `ncmax`, including the `>= 2` cases with no closed form.
pub fn invert_required_ru_numeric(n: u64, d: u64, pf_target: f64, ncmax: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    if !(pf_target > 0.0 && pf_target < 1.0) {
        return Err(Error::Precondition(format!(
            "pf_target must lie in (0, 1), got {pf_target}"
        )));
    }
    // with no interferers, or all collisions resolvable, any grid works
    if d == 0 || ncmax >= d {
        return Ok(n);
    }
    let pred = |n_ru: u64| -> Result<bool> {
        Ok(analytic::failure_prob_resolvable(n, d, n_ru, ncmax)? <= pf_target)
    };
    let found = smallest_true(n, MAX_RESOURCE_UNITS, pred)?.ok_or_else(|| {
        Error::Range(format!(
            "no n_ru <= 2^53 reaches pf_target = {pf_target} for n = {n}, d = {d}, ncmax = {ncmax}"
        ))
    })?;
    // the bisection boundary must be exact: true at `found`, false below
    if !pred(found)? || (found > n && pred(found - 1)?) {
        return Err(Error::Internal(
            "failure probability was not monotone across the bisection bracket".into(),
        ));
    }
    Ok(found)
}

/// `g(z) = ln(1 + e z) (W_-1(z) + 1)` on `(-1/e, 0)`; positive in the
/// interior, vanishing at both endpoints.
pub fn g_of_z(z: f64) -> Result<f64> {
    let w = lambert_wm1(z)?;
    Ok((E * z).ln_1p() * (w + 1.0))
}

/// `g'(z)`, using `W'(z) = W / (z (1 + W))`.
fn g_prime(z: f64) -> f64 {
    let w = lambert_wm1(z).expect("z inside (-1/e, 0)");
    let w_prime = w / (z * (1.0 + w));
    E * (w + 1.0) / (1.0 + E * z) + (E * z).ln_1p() * w_prime
}

/// Maximizer of `g(z)` on `(-1/e, 0)`: golden-section search to
/// `|z - z_star| <= 1e-9`, then a derivative-bisection polish (comparisons
/// of `g` itself cannot resolve the flat maximum much below 1e-8, while the
/// repetition coefficient depends on `z_star` to first order).
///
/// Returns `(z_star, g(z_star))`. The optimal repetition and
/// minimum-resource coefficients of the single-resolution closed forms are
/// derived from this point.
pub fn maximize_g() -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
    let mut a = -INV_E + 1e-12;
    let mut b = -1e-12;
    // interior of the domain: evaluation cannot fail
    let eval = |z: f64| g_of_z(z).expect("z inside (-1/e, 0)");
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    while (b - a).abs() > 1e-9 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = eval(d);
        }
    }
    // bracket the sign change of g' around the golden-section estimate
    let mid = 0.5 * (a + b);
    let mut width = 1e-7;
    let (mut lo, mut hi) = (mid - width, mid + width);
    while !(g_prime(lo) > 0.0 && g_prime(hi) < 0.0) {
        width *= 10.0;
        lo = mid - width;
        hi = mid + width;
    }
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if g_prime(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let z_star = 0.5 * (lo + hi);
    (z_star, eval(z_star))
}

/// Integer scan for the repetition count minimizing the numerically
/// inverted resource requirement. Returns `(n_star, n_ru_min)`; ties break
/// toward the smaller `n`.
///
/// The scan range is twice the no-resolution continuous optimum (at least
/// 30): with resolution capability the optimum can only move left.
pub fn optimal_reps_numeric(d: u64, pf_target: f64, ncmax: u64) -> Result<(u64, u64)> {
    if d < 1 {
        return Err(Error::Precondition("d must be >= 1".into()));
    }
    if !(pf_target > 0.0 && pf_target < 1.0) {
        return Err(Error::Precondition(format!(
            "pf_target must lie in (0, 1), got {pf_target}"
        )));
    }
    let n_hi = ((2.0 * (-pf_target.ln() / std::f64::consts::LN_2).ceil()) as u64).max(30);
    let mut best: Option<(u64, u64)> = None;
    for n in 1..=n_hi {
        let n_ru = invert_required_ru_numeric(n, d, pf_target, ncmax)?;
        if best.map_or(true, |(_, b)| n_ru < b) {
            best = Some((n, n_ru));
        }
    }
    Ok(best.expect("scan range is non-empty"))
}
