use entrokit::special::{digamma, ln_factorial, log_gamma, trigamma};
use proptest::prelude::*;

// (x, lnΓ(x), ψ(x), ψ'(x)) at 40 digits, rounded to 20
const REFERENCE: [(f64, f64, f64, f64); 7] = [
    (1e-6, 13.815_509_980_749_432, -1_000_000.577_214_02, 1_000_000_000_001.644_9),
    (0.5, 0.572_364_942_924_700_1, -1.963_510_026_021_423_5, 4.934_802_200_544_679),
    (3.7, 1.428_072_326_665_387_9, 1.167_153_539_361_511_3, 0.310_037_857_670_038_33),
    (7.5, 7.534_364_236_758_733, 1.946_757_484_246_086_9, 0.142_615_896_696_703_8),
    (10.0, 12.801_827_480_081_469, 2.251_752_589_066_721, 0.105_166_335_681_685_75),
    (123.456, 469.605_547_129_929_45, 4.811_829_323_828_985, 0.008_132_945_834_278_198),
    (1e6, 12_815_504.569_147_611, 13.815_510_057_964_191, 1.000_000_500_000_166_7e-6),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[test]
fn log_gamma_matches_reference() {
    for (x, lg, _, _) in REFERENCE {
        let got = log_gamma(x).unwrap();
        assert!(rel(got, lg) < 1e-14, "lnΓ({x}) = {got}, want {lg}");
    }
}

#[test]
fn digamma_matches_reference() {
    for (x, _, psi, _) in REFERENCE {
        let got = digamma(x).unwrap();
        assert!(rel(got, psi) < 1e-13, "ψ({x}) = {got}, want {psi}");
    }
}

#[test]
fn trigamma_matches_reference() {
    for (x, _, _, psi1) in REFERENCE {
        let got = trigamma(x).unwrap();
        assert!((got - psi1).abs() / psi1 < 1e-13, "ψ'({x}) = {got}, want {psi1}");
    }
}

#[test]
fn gamma_of_a_tenth() {
    let g = log_gamma(0.1).unwrap().exp();
    assert!((g - 9.513_507_698_668_732).abs() < 1e-13);
}

#[test]
fn rejects_nonpositive() {
    for x in [0.0, -1.0, -0.5, f64::NAN, f64::NEG_INFINITY] {
        assert!(log_gamma(x).is_err());
        assert!(digamma(x).is_err());
        assert!(trigamma(x).is_err());
    }
}

#[test]
fn factorials_agree_with_log_gamma() {
    for n in 0..200u64 {
        let a = ln_factorial(n);
        let b = log_gamma(n as f64 + 1.0).unwrap();
        assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0), "n = {n}: {a} vs {b}");
    }
}

/// `Σ_{k<N} 1/(x+k)²` plus the Euler–Maclaurin tail at `x+N`.
fn trigamma_by_series(x: f64) -> f64 {
    let n = 2000;
    let head: f64 = (0..n).map(|k| 1.0 / (x + k as f64).powi(2)).sum();
    let z = x + n as f64;
    head + 1.0 / z + 1.0 / (2.0 * z * z) + 1.0 / (6.0 * z.powi(3))
}

proptest! {
    #[test]
    fn log_gamma_recurrence(x in 1e-3f64..200.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }

    #[test]
    fn digamma_recurrence(x in 1e-3f64..200.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }

    #[test]
    fn trigamma_recurrence(x in 1e-3f64..200.0) {
        let lhs = trigamma(x + 1.0).unwrap();
        let rhs = trigamma(x).unwrap() - 1.0 / (x * x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn trigamma_sandwich(x in 1e-2f64..1e4) {
        // 1/x + 1/(2x²) < ψ'(x) < 1/x + 1/x²
        let t = trigamma(x).unwrap();
        prop_assert!(t > 1.0 / x + 0.5 / (x * x) - 1e-15 * t);
        prop_assert!(t < 1.0 / x + 1.0 / (x * x) + 1e-15 * t);
    }

    #[test]
    fn trigamma_against_series(x in 1e-2f64..50.0) {
        let want = trigamma_by_series(x);
        prop_assert!((trigamma(x).unwrap() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn digamma_increasing_trigamma_decreasing(x in 1e-3f64..1e3, dx in 1e-3f64..1.0) {
        prop_assert!(digamma(x + dx).unwrap() > digamma(x).unwrap());
        prop_assert!(trigamma(x + dx).unwrap() < trigamma(x).unwrap());
    }

    #[test]
    fn digamma_below_log(x in 1e-2f64..1e5) {
        // ψ(x) < log x
        prop_assert!(digamma(x).unwrap() < x.ln());
    }
}
