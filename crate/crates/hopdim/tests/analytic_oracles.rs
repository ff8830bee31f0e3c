//! Oracle tests for the closed forms: exact rational-arithmetic evaluation
//! of the failure probabilities (the formulas are rational functions of
//! integer arguments), exact integer scans for the required/minimum
//! resource counts, and frozen high-precision reference values.

mod common;

use common::*;
use num_rational::BigRational;
use num_traits::One;

use hopdim::analytic::*;

/// Smallest n_ru whose *exact* failure probability is at or below the exact
/// rational target. The exact probability is strictly decreasing in n_ru,
/// so bisection plus a verified two-point boundary equals a full scan.
fn scan_required_ru(n: u64, d: u64, pf: &BigRational, ncmax: u64) -> u64 {
    let pred = |n_ru: u64| &exact_failure(n, d, n_ru, ncmax) <= pf;
    let mut lo = n;
    if pred(lo) {
        return lo;
    }
    let mut hi = n;
    while !pred(hi) {
        hi *= 2;
        assert!(hi < 1_000_000, "runaway bracket");
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!(pred(hi) && !pred(hi - 1), "boundary must be exact");
    hi
}

#[test]
fn failure_prob_no_resolution_matches_exact_rational() {
    for (n, d, n_ru) in [
        (1u64, 1u64, 4u64),
        (2, 1, 4),
        (20, 100, 2886),
        (19, 100, 2888),
        (10, 50, 724),
        (7, 13, 200),
        (3, 400, 5000),
        (26, 100, 2947),
    ] {
        let exact = exact_failure(n, d, n_ru, 0);
        let got = failure_prob_no_resolution(n, d, n_ru).unwrap();
        assert_rel_close(got, &exact, 1e-11);
    }
}

#[test]
fn failure_prob_high_reliability_point() {
    // frozen from 40-digit evaluation: 9.9778522798434188e-7
    let p = failure_prob_no_resolution(20, 100, 2886).unwrap();
    assert!((p - 9.9778522798434188e-7).abs() < 1e-18);
    assert!(p <= 1e-6);
    // one resource unit fewer misses the target
    let exact_2885 = exact_failure(20, 100, 2885, 0);
    assert!(exact_2885 > rat(1, 1_000_000));
    assert!(failure_prob_no_resolution(20, 100, 2885).unwrap() > 1e-6);
}

#[test]
fn required_ru_matches_exact_integer_scan() {
    let pf6 = rat(1, 1_000_000);
    assert_eq!(scan_required_ru(20, 100, &pf6, 0), 2886);
    assert_eq!(required_ru_no_resolution(20, 100, 1e-6).unwrap(), 2886);

    // the continuous inverse at n = 19 is 2887.08, so the scan lands on 2888
    assert_eq!(scan_required_ru(19, 100, &pf6, 0), 2888);
    assert_eq!(required_ru_no_resolution(19, 100, 1e-6).unwrap(), 2888);

    assert_eq!(scan_required_ru(1, 1, &rat(1, 4), 0), 4);
    assert_eq!(required_ru_no_resolution(1, 1, 0.25).unwrap(), 4);

    assert_eq!(scan_required_ru(4, 10, &rat(1, 100), 0), 108);
    assert_eq!(required_ru_no_resolution(4, 10, 1e-2).unwrap(), 108);
}

#[test]
fn min_ru_matches_two_dimensional_scan() {
    // independent oracle: direct powi evaluation, scanned over (n, n_ru)
    let naive_pf = |n: u64, d: u64, n_ru: u64| -> f64 {
        (1.0 - (1.0 - n as f64 / n_ru as f64).powi(d as i32)).powi(n as i32)
    };
    let mut global_min = u64::MAX;
    let mut argmin_n = 0;
    for n in 10..=40u64 {
        let mut n_ru = n.max(2500);
        while naive_pf(n, 100, n_ru) > 1e-6 {
            n_ru += 1;
        }
        if n_ru < global_min {
            global_min = n_ru;
            argmin_n = n;
        }
    }
    assert_eq!((argmin_n, global_min), (20, 2886));
    assert_eq!(min_ru_no_resolution(100, 1e-6).unwrap(), 2886);
}

#[test]
fn min_ru_linear_form_values() {
    assert_eq!(min_ru_no_resolution_linear(100, 1e-6).unwrap(), 2876);
    // agreement with the exact-in-d form: relative gap < 1% for d >= 50
    for d in [50u64, 100, 200, 500, 1000, 2000, 5000] {
        let full = min_ru_no_resolution(d, 1e-6).unwrap() as f64;
        let lin = min_ru_no_resolution_linear(d, 1e-6).unwrap() as f64;
        assert!((full - lin).abs() / full < 0.01, "d = {d}: {full} vs {lin}");
    }
}

#[test]
fn min_ru_consistency_with_required_at_optimum() {
    for d in [10u64, 100, 1000] {
        let n_star = optimal_reps_no_resolution(1e-6).unwrap().round() as u64;
        let via_required = required_ru_no_resolution(n_star, d, 1e-6).unwrap();
        let direct = min_ru_no_resolution(d, 1e-6).unwrap();
        assert!(
            via_required.abs_diff(direct) <= 1,
            "d = {d}: {via_required} vs {direct}"
        );
    }
}

#[test]
fn optimal_reps_continuous_value() {
    let n_star = optimal_reps_no_resolution(1e-6).unwrap();
    assert!((n_star - 19.931568569324174).abs() < 1e-12);
    // integer scan of the required count attains its minimum at 20
    let best = (1..=40u64)
        .min_by_key(|&n| (required_ru_no_resolution(n, 100, 1e-6).unwrap(), n))
        .unwrap();
    assert_eq!(best, 20);
}

#[test]
fn collision_pmf_matches_exact_rational() {
    for (c, d, n, n_ru) in [
        (0u64, 5u64, 1u64, 10u64),
        (1, 2, 1, 4),
        (3, 100, 10, 1037),
        (17, 200, 7, 500),
        (30, 30, 7, 500),
        (5, 30, 7, 500),
    ] {
        let r = rat(n, n_ru);
        let exact = BigRational::from_integer(binom_big(d, c))
            * pow_rat(&r, c)
            * pow_rat(&(BigRational::one() - &r), d - c);
        assert_rel_close(collision_pmf(c, d, n, n_ru).unwrap(), &exact, 1e-12);
    }
}

#[test]
fn failure_prob_resolvable_matches_exact_rational() {
    for (n, d, n_ru, ncmax) in [
        (10u64, 100u64, 1037u64, 1u64),
        (10, 100, 1000, 1),
        (6, 100, 542, 2),
        (5, 100, 336, 3),
        (10, 50, 300, 1),
        (4, 9, 30, 2),
    ] {
        let exact = exact_failure(n, d, n_ru, ncmax);
        let got = failure_prob_resolvable(n, d, n_ru, ncmax).unwrap();
        assert_rel_close(got, &exact, 1e-11);
    }
}

#[test]
fn single_resolution_reliability_point() {
    // frozen from 40-digit evaluation
    let p = failure_prob_resolvable(10, 100, 1037, 1).unwrap();
    assert!((p - 9.9454880305987904e-7).abs() < 1e-17);
    assert!(p <= 1e-6);
    assert!(failure_prob_resolvable(10, 100, 1036, 1).unwrap() > 1e-6);
    let p1000 = failure_prob_resolvable(10, 100, 1000, 1).unwrap();
    assert!((p1000 - 1.6594076271504545e-6).abs() < 1e-16);
    assert!(p1000 > 1e-6);
}

#[test]
fn single_resolution_closed_form_matches_exact_scan() {
    let pf6 = rat(1, 1_000_000);
    // exact scan of the ncmax = 1 failure probability
    assert_eq!(scan_required_ru(10, 100, &pf6, 1), 1037);
    assert_eq!(required_ru_single_resolution(10, 100, 1e-6).unwrap(), 1037);
}

#[test]
fn single_resolution_monotone_and_linear_in_d() {
    let mut prev = 0;
    for d in [50u64, 100, 200, 400] {
        let v = required_ru_single_resolution(10, d, 1e-6).unwrap();
        assert!(v > prev, "not strictly increasing at d = {d}");
        prev = v;
    }
    let at_100 = required_ru_single_resolution(10, 100, 1e-6).unwrap() as f64;
    let at_1000 = required_ru_single_resolution(10, 1000, 1e-6).unwrap() as f64;
    assert!((at_1000 / at_100 - 10.0).abs() / 10.0 < 0.01);
}

#[test]
fn resolution_gain_ratio_at_d_1000() {
    let no_res = min_ru_no_resolution(1000, 1e-6).unwrap() as f64;
    let single = min_ru_single_resolution(1000, 1e-6).unwrap() as f64;
    let ratio = no_res / single;
    assert!((ratio - 2.77).abs() <= 0.01, "ratio = {ratio}");
}

#[test]
fn min_ru_single_resolution_linear_in_d() {
    for d in [100u64, 500] {
        let v1 = min_ru_single_resolution(d, 1e-6).unwrap();
        let v2 = min_ru_single_resolution(2 * d, 1e-6).unwrap();
        assert!(v2.abs_diff(2 * v1) <= 1, "d = {d}: {v2} vs 2*{v1}");
    }
}
