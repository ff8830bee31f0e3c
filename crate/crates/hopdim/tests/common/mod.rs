//! Exact rational-arithmetic helpers shared by the oracle test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow_rat(r: &BigRational, mut e: u64) -> BigRational {
    let mut base = r.clone();
    let mut acc = BigRational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

pub fn binom_big(d: u64, c: u64) -> BigInt {
    if c > d {
        return BigInt::zero();
    }
    let mut b = BigInt::one();
    for i in 0..c.min(d - c) {
        b = b * BigInt::from(d - i) / BigInt::from(i + 1);
    }
    b
}

/// Exact per-repetition-independent failure probability (the closed-form
/// model): `(1 - sum_{c=0}^{ncmax} C(d,c) r^c (1-r)^(d-c))^n`, `r = n/n_ru`.
pub fn exact_failure(n: u64, d: u64, n_ru: u64, ncmax: u64) -> BigRational {
    if d == 0 || ncmax >= d {
        return BigRational::zero();
    }
    let r = rat(n, n_ru);
    let one_minus_r = BigRational::one() - &r;
    let mut resolved = BigRational::zero();
    for c in 0..=ncmax.min(d) {
        resolved += BigRational::from_integer(binom_big(d, c))
            * pow_rat(&r, c)
            * pow_rat(&one_minus_r, d - c);
    }
    pow_rat(&(BigRational::one() - resolved), n)
}

/// Exact failure probability of the *simulated* uniform-mode process with
/// no collision resolution, by inclusion-exclusion over the target cells
/// missed by every interferer. Unlike [`exact_failure`] this accounts for
/// the dependence between repetitions induced by interferers hopping over
/// n distinct cells.
pub fn exact_uniform_failure_nc0(n: u64, d: u64, n_ru: u64) -> BigRational {
    let total = binom_big(n_ru, n);
    let mut p = BigRational::zero();
    for k in 0..=n {
        let miss = BigRational::new(binom_big(n_ru - k, n), total.clone());
        let term = BigRational::from_integer(binom_big(n, k)) * pow_rat(&miss, d);
        if k % 2 == 0 {
            p += term;
        } else {
            p -= term;
        }
    }
    p
}

/// f64 view of a rational with huge components, via bit-length scaling.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    let shift_n = n.bits().saturating_sub(80) as i64;
    let shift_d = d.bits().saturating_sub(80) as i64;
    let nn = (n >> shift_n).to_f64().unwrap();
    let dd = (d >> shift_d).to_f64().unwrap();
    nn / dd * 2f64.powi((shift_n - shift_d) as i32)
}

#[track_caller]
pub fn assert_rel_close(actual: f64, exact: &BigRational, rel_tol: f64) {
    let a = BigRational::from_float(actual).expect("finite");
    let diff = (&a - exact).abs();
    let bound = exact.abs() * BigRational::from_float(rel_tol).unwrap();
    assert!(
        diff <= bound,
        "actual {actual:.17e} vs exact {:.17e} (rel err {:.3e} > {rel_tol:.1e})",
        rat_to_f64(exact),
        rat_to_f64(&(&diff / &exact.abs()))
    );
}
