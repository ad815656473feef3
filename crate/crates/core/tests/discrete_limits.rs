use approx::assert_relative_eq;
use entrokit::discrete::{
    log_weighted_growth, binomial_to_poisson, nb_to_logarithmic, poisson_entropy,
    poisson_entropy_derivative, DEFAULT_R_GRID,
};
use entrokit::validation::log_grid;
use entrokit::{entropy, Distribution, Exec};
use proptest::prelude::*;

#[test]
fn poisson_entropy_positive_over_wide_range() {
    for l in log_grid(1e-3, 1e3, 200) {
        assert!(poisson_entropy(l).unwrap() > 0.0, "λ = {l}");
    }
}

#[test]
fn poisson_entropy_concave() {
    let grid = log_grid(0.01, 500.0, 300);
    let h: Vec<f64> = grid.iter().map(|&l| poisson_entropy(l).unwrap()).collect();
    for i in 1..grid.len() - 1 {
        // divided differences on a nonuniform grid
        let left = (h[i] - h[i - 1]) / (grid[i] - grid[i - 1]);
        let right = (h[i + 1] - h[i]) / (grid[i + 1] - grid[i]);
        assert!(right < left, "λ = {}", grid[i]);
    }
}

#[test]
fn derivative_below_jensen_ceiling() {
    for l in log_grid(100.0, 1e4, 30) {
        let d = poisson_entropy_derivative(l).unwrap();
        assert!(d > 0.0);
        assert!(d <= ((l + 1.0) / l).ln() + 1e-3, "λ = {l}: {d}");
    }
}

#[test]
fn derivative_pins() {
    for (l, want) in [
        (1.0, 0.573_402_809_122_620_2),
        (100.0, 0.005_008_418_296_799_208),
        (1000.0, 5.000_834_168_254_517e-4),
    ] {
        assert_relative_eq!(poisson_entropy_derivative(l).unwrap(), want, max_relative = 1e-10);
    }
}

#[test]
fn growth_series_values() {
    let rows = log_weighted_growth(&[1.0, 10.0, 100.0, 1000.0], Exec::Sequential).unwrap();
    assert_relative_eq!(rows[0].value, 0.573_402_809_122_620_2, max_relative = 1e-12);
    assert_relative_eq!(rows[1].value, 2.353_526_519_978_739, max_relative = 1e-12);
    assert_relative_eq!(rows[3].value, 6.908_255_362_398_963, max_relative = 1e-12);
    assert!(rows.windows(2).all(|w| w[1].value > w[0].value));
    assert!(rows[3].value > 101f64.ln());
}

#[test]
fn growth_series_passes_every_log_level() {
    let grid = log_grid(1.0, 1e6, 25);
    let rows = log_weighted_growth(&grid, Exec::default()).unwrap();
    for n in [2.0f64, 10.0, 100.0] {
        let bar = (n + 1.0).ln() * (1.0 - 1e-3);
        assert!(rows.iter().any(|r| r.value > bar), "never exceeds log({n}+1)");
    }
}

#[test]
fn binomial_small_case() {
    let d = Distribution::binomial(2, 0.5).unwrap();
    assert_relative_eq!(
        entropy::shannon(&d).unwrap(),
        1.5 * std::f64::consts::LN_2,
        max_relative = 1e-14
    );
}

#[test]
fn binomial_table_converges() {
    let grid = [10, 100, 1000, 10_000];
    let t = binomial_to_poisson(2.0, &grid, 0.0, Exec::Sequential).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t.eventually_decreasing(4));
    assert!(t.final_error().unwrap() < 1e-3);
    // error shrinks roughly like 1/n
    for w in t.rows.windows(2) {
        let ratio = w[0].abs_error / w[1].abs_error;
        assert!(ratio > 5.0 && ratio < 20.0, "ratio {ratio}");
    }
}

#[test]
fn perturbed_binomial_still_converges() {
    let grid = [100, 1000, 10_000, 100_000];
    let t = binomial_to_poisson(3.0, &grid, 5.0, Exec::Sequential).unwrap();
    assert!(t.eventually_decreasing(4));
    assert!(t.final_error().unwrap() < 1e-3);
    let plain = binomial_to_poisson(3.0, &grid, 0.0, Exec::Sequential).unwrap();
    assert!(t.rows[0].abs_error != plain.rows[0].abs_error);
}

#[test]
fn nb_table_converges() {
    let t = nb_to_logarithmic(0.5, &DEFAULT_R_GRID, Exec::Sequential).unwrap();
    assert!(t.eventually_decreasing(4));
    assert!(t.final_error().unwrap() < 1e-3);
    assert_relative_eq!(t.rows[0].limit, 0.882_924_435_802_868, max_relative = 1e-12);
}

#[test]
fn sequential_and_parallel_tables_agree() {
    let a = binomial_to_poisson(1.5, &[10, 50, 250], 0.0, Exec::Sequential).unwrap();
    let b = binomial_to_poisson(1.5, &[10, 50, 250], 0.0, Exec::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn grid_errors() {
    assert!(binomial_to_poisson(2.0, &[], 0.0, Exec::Sequential).is_err());
    assert!(binomial_to_poisson(2.0, &[10, 10], 0.0, Exec::Sequential).is_err());
    assert!(binomial_to_poisson(-1.0, &[10], 0.0, Exec::Sequential).is_err());
    assert!(binomial_to_poisson(2.0, &[10], f64::NAN, Exec::Sequential).is_err());
    assert!(nb_to_logarithmic(0.5, &[0.1, 0.0], Exec::Sequential).is_err());
    assert!(nb_to_logarithmic(1.5, &[0.1], Exec::Sequential).is_err());
    assert!(log_weighted_growth(&[2.0, 1.0], Exec::Sequential).is_err());
}

proptest! {
    #[test]
    fn poisson_increasing(a in 1e-3f64..500.0, f in 1.001f64..2.0) {
        prop_assert!(poisson_entropy(a * f).unwrap() > poisson_entropy(a).unwrap());
    }

    #[test]
    fn derivative_matches_difference_quotient(l in 0.05f64..200.0) {
        let h = 1e-4 * l;
        let fd = (poisson_entropy(l + h).unwrap() - poisson_entropy(l - h).unwrap()) / (2.0 * h);
        let d = poisson_entropy_derivative(l).unwrap();
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-3), "{fd} vs {d}");
    }
}
