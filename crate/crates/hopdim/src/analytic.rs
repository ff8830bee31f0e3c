//! Closed-form failure probabilities, required resource counts and optimal
//! repetition numbers.
//!
//! All probability evaluation happens in the log domain (`ln_1p` / `exp_m1`
//! conventions): failure targets sit near 1e-6 and below while the
//! per-repetition factors sit near 1/2, and one uniform policy avoids
//! case-by-case precision analysis.
//!
//! The constants of the single-collision-resolution forms (the minimum
//! resource coefficient ~0.7502 and the repetition coefficient ~0.6996) are
//! not hardcoded literals: they are derived once from the maximizer of
//! `g(z) = ln(1 + e z) (W_-1(z) + 1)` and cached.

use std::f64::consts::{E, LN_2};
use std::sync::OnceLock;

use statrs::function::beta::checked_beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics;

/// `ln(1 - e^t)` for `t <= 0`, switching between `ln(-expm1(t))` and
/// `ln_1p(-exp(t))` at `t = -ln 2` to stay accurate at both ends.
#[inline]
fn ln_one_minus_exp(t: f64) -> f64 {
    debug_assert!(t <= 0.0);
    if t > -LN_2 {
        (-t.exp_m1()).ln()
    } else {
        (-t.exp()).ln_1p()
    }
}

/// Ceiling with an integer snap: values within a relative 1e-12 of an
/// integer are treated as that integer first, so formulas whose exact value
/// is integral (e.g. a target of 1/4 with one interferer) do not get bumped
/// a unit by floating-point noise.
fn ceil_to_count(x: f64, what: &str) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Range(format!("{what} evaluated to {x}")));
    }
    if x >= numerics::MAX_RESOURCE_UNITS as f64 {
        return Err(Error::Range(format!(
            "{what} = {x:.3e} exceeds the 2^53 resource-count limit"
        )));
    }
    let nearest = x.round();
    let snapped = if (x - nearest).abs() <= 1e-12 * x.abs().max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    Ok(snapped as u64)
}

fn check_failure_args(n: u64, n_ru: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    if n > n_ru {
        return Err(Error::Precondition(format!(
            "n = {n} exceeds n_ru = {n_ru}"
        )));
    }
    Ok(())
}

fn check_pf(pf_target: f64) -> Result<()> {
    if !(pf_target > 0.0 && pf_target < 1.0) {
        return Err(Error::Precondition(format!(
            "pf_target must lie in (0, 1), got {pf_target}"
        )));
    }
    Ok(())
}

/// Failure probability with collisions as disruptive events:
/// `(1 - (1 - n/n_ru)^d)^n`. A transmission fails when every one of the `n`
/// repetitions suffers at least one collision. `d = 0` returns 0.
pub fn failure_prob_no_resolution(n: u64, d: u64, n_ru: u64) -> Result<f64> {
    check_failure_args(n, n_ru)?;
    if d == 0 {
        return Ok(0.0);
    }
    if n == n_ru {
        // every interferer collides with every repetition
        return Ok(1.0);
    }
    let r = n as f64 / n_ru as f64;
    let log_p0 = d as f64 * (-r).ln_1p(); // ln((1 - r)^d) < 0
    Ok((n as f64 * ln_one_minus_exp(log_p0)).exp())
}

/// Resource units required to hit `pf_target` with `n` repetitions and no
/// collision resolution: `ceil(n / (1 - (1 - pf^(1/n))^(1/d)))`.
pub fn required_ru_no_resolution(n: u64, d: u64, pf_target: f64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    check_pf(pf_target)?;
    if d == 0 {
        return Ok(n); // no interference: the grid only has to hold the pattern
    }
    let ln_pf_root = pf_target.ln() / n as f64; // ln(pf^(1/n))
    let ln_one_minus_root = ln_one_minus_exp(ln_pf_root); // ln(1 - pf^(1/n))
    let denom = -(ln_one_minus_root / d as f64).exp_m1(); // 1 - (...)^(1/d)
    let raw = n as f64 / denom;
    Ok(ceil_to_count(raw, "required n_ru")?.max(n))
}

/// Continuous repetition count minimizing the no-resolution resource
/// requirement: `-ln(pf_target) / ln 2`. Independent of `d`.
pub fn optimal_reps_no_resolution(pf_target: f64) -> Result<f64> {
    check_pf(pf_target)?;
    Ok(-pf_target.ln() / LN_2)
}

/// Minimum resource units over all repetition choices, no collision
/// resolution (large-`d` form):
/// `ceil(ln(pf) / (((1/2)^(1/d) - 1) ln 2))`.
pub fn min_ru_no_resolution(d: u64, pf_target: f64) -> Result<u64> {
    if d < 1 {
        return Err(Error::Precondition("d must be >= 1".into()));
    }
    check_pf(pf_target)?;
    // (1/2)^(1/d) - 1 = expm1(-ln2 / d)
    let denom = (-LN_2 / d as f64).exp_m1() * LN_2;
    ceil_to_count(pf_target.ln() / denom, "minimum n_ru")
}

/// Linear-in-`d` approximation of [`min_ru_no_resolution`]:
/// `ceil(d / ln^2(2) * ln(1/pf_target))`. The coefficient `1/ln^2(2)`
/// (= 2.0814 to four digits) is evaluated at full precision.
pub fn min_ru_no_resolution_linear(d: u64, pf_target: f64) -> Result<u64> {
    if d < 1 {
        return Err(Error::Precondition("d must be >= 1".into()));
    }
    check_pf(pf_target)?;
    ceil_to_count(d as f64 / (LN_2 * LN_2) * -pf_target.ln(), "minimum n_ru")
}

/// ln C(d, c) via log-gamma.
fn ln_choose(d: u64, c: u64) -> f64 {
    ln_gamma(d as f64 + 1.0) - ln_gamma(c as f64 + 1.0) - ln_gamma((d - c) as f64 + 1.0)
}

/// Probability that exactly `c` of the `d` interferers collide with one
/// given repetition: binomial PMF with per-interferer hit probability
/// `n / n_ru`. Log-gamma evaluation keeps large `d` accurate; the `c = 0`
/// and `c = d` boundaries are exact powers.
pub fn collision_pmf(c: u64, d: u64, n: u64, n_ru: u64) -> Result<f64> {
    if c > d {
        return Err(Error::Precondition(format!("c = {c} exceeds d = {d}")));
    }
    check_failure_args(n, n_ru)?;
    if n == n_ru {
        // every interferer hits with probability 1
        return Ok(if c == d { 1.0 } else { 0.0 });
    }
    let r = n as f64 / n_ru as f64;
    // boundary cases are pure powers; skip the log-gamma term, which is
    // mathematically zero there but numerically only approximately so
    let ln_pmf = match c {
        0 => d as f64 * (-r).ln_1p(),
        _ if c == d => d as f64 * r.ln(),
        _ => ln_choose(d, c) + c as f64 * r.ln() + (d - c) as f64 * (-r).ln_1p(),
    };
    Ok(ln_pmf.exp())
}

/// Failure probability when the receiver resolves up to `ncmax` collisions
/// per resource unit: `(P(N_c > ncmax))^n`, the per-repetition loss
/// probability being the upper binomial tail beyond `ncmax`.
///
/// `ncmax = 0` delegates to [`failure_prob_no_resolution`] and is therefore
/// bit-for-bit identical to it; `ncmax >= d` returns 0. The tail is
/// evaluated through the regularized incomplete beta function rather than a
/// `1 - sum(pmf)` subtraction, which would cancel precisely when the tail
/// is small.
pub fn failure_prob_resolvable(n: u64, d: u64, n_ru: u64, ncmax: u64) -> Result<f64> {
    check_failure_args(n, n_ru)?;
    if ncmax == 0 {
        return failure_prob_no_resolution(n, d, n_ru);
    }
    if ncmax >= d {
        return Ok(0.0);
    }
    let r = n as f64 / n_ru as f64;
    // P(X >= k) for X ~ Binomial(d, r) equals I_r(k, d - k + 1)
    let k = ncmax + 1;
    let tail = if r == 1.0 {
        1.0
    } else {
        checked_beta_reg(k as f64, (d - ncmax) as f64, r)
            .map_err(|e| Error::Internal(format!("beta_reg failed: {e}")))?
    };
    Ok((n as f64 * tail.ln()).exp())
}

/// Resource units required with single-collision resolution (`ncmax = 1`),
/// from the Lambert-W closed form:
/// `ceil(-n d / (W_-1((pf^(1/n) - 1)/e) + 1))`.
///
/// Derived under a large-`d` approximation; agreement with the exact
/// numeric inversion is within one unit for `d >= 50` and a few percent
/// down to `d ~ 20`.
pub fn required_ru_single_resolution(n: u64, d: u64, pf_target: f64) -> Result<u64> {
    if n < 1 || d < 1 {
        return Err(Error::Precondition("n and d must be >= 1".into()));
    }
    check_pf(pf_target)?;
    // pf^(1/n) - 1 in (-1, 0), so the W argument lies in (-1/e, 0)
    let x = (pf_target.ln() / n as f64).exp_m1() / E;
    if !(-1.0 / E..0.0).contains(&x) {
        return Err(Error::Domain(format!(
            "Lambert argument {x} outside [-1/e, 0)"
        )));
    }
    let w = numerics::lambert_wm1(x)?;
    let raw = -(n as f64 * d as f64) / (w + 1.0);
    Ok(ceil_to_count(raw, "required n_ru")?.max(n))
}

/// Constants of the single-resolution minimum, derived from the maximizer
/// of `g(z) = ln(1 + e z) (W_-1(z) + 1)`.
#[derive(Debug, Clone, Copy)]
pub struct SingleResolutionConstants {
    /// Maximizer of `g`; -0.2798 to four digits.
    pub z_star: f64,
    /// `g(z_star)`.
    pub g_star: f64,
    /// `1 / g(z_star)`: minimum resource units per interferer per unit of
    /// `-ln(pf)`; 0.7502 to four digits.
    pub min_ru_coeff: f64,
    /// `-1 / ln(1 + e z_star)`: optimal repetitions per unit of `-ln(pf)`;
    /// about 0.6996 (quoted as 0.6995 when rounded through a four-digit
    /// `z_star`).
    pub reps_coeff: f64,
}

/// Derive (once) and cache the single-resolution constants.
pub fn single_resolution_constants() -> &'static SingleResolutionConstants {
    static CONSTANTS: OnceLock<SingleResolutionConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let (z_star, g_star) = numerics::maximize_g();
        SingleResolutionConstants {
            z_star,
            g_star,
            min_ru_coeff: 1.0 / g_star,
            reps_coeff: -1.0 / (E * z_star).ln_1p(),
        }
    })
}

/// Continuous repetition count minimizing the single-resolution resource
/// requirement: `reps_coeff * ln(1/pf_target)`. Independent of `d`.
pub fn optimal_reps_single_resolution(pf_target: f64) -> Result<f64> {
    check_pf(pf_target)?;
    Ok(single_resolution_constants().reps_coeff * -pf_target.ln())
}

/// Minimum resource units over all repetition choices with single-collision
/// resolution: `ceil(min_ru_coeff * d * ln(1/pf_target))`.
pub fn min_ru_single_resolution(d: u64, pf_target: f64) -> Result<u64> {
    if d < 1 {
        return Err(Error::Precondition("d must be >= 1".into()));
    }
    check_pf(pf_target)?;
    ceil_to_count(
        single_resolution_constants().min_ru_coeff * d as f64 * -pf_target.ln(),
        "minimum n_ru",
    )
}
