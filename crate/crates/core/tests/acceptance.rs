//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any failed.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use entrokit::discrete::{
    binomial_to_poisson, nb_to_logarithmic, poisson_entropy, poisson_entropy_derivative,
    DEFAULT_R_GRID,
};
use entrokit::entropy::{self, kl_divergence, modified_shannon};
use entrokit::gaussian::{fgn_det_sweep, hadamard_gap};
use entrokit::validation::{
    log_grid, oracle_equivalence, random_kl_pair, random_psd, rng, CLOSED_FORM_FAMILIES,
    CORE_MEASURES, DEFAULT_SEED,
};
use entrokit::{Distribution, Exec, OracleConfig};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn strictly(v: &[f64], increasing: bool) -> bool {
    v.windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

fn oracle_equivalence_core() -> Outcome {
    let start = Instant::now();
    let cmp = match oracle_equivalence(
        &CLOSED_FORM_FAMILIES,
        &CORE_MEASURES,
        200,
        DEFAULT_SEED,
        &OracleConfig::default(),
        Exec::default(),
    ) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("oracle error: {e}")),
    };
    let elapsed = start.elapsed();
    let worst = cmp
        .iter()
        .max_by(|a, b| a.scaled_error.total_cmp(&b.scaled_error))
        .unwrap();
    let failures = cmp.iter().filter(|c| !(c.scaled_error <= 1e-8)).count();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} comparisons, {failures} above 1e-8(1+|v|), worst {:.2e} ({} {}), {:.1}s",
            cmp.len(),
            worst.scaled_error,
            worst.dist,
            worst.spec,
            elapsed.as_secs_f64()
        ),
    )
}

fn value_pins() -> Outcome {
    let mut bad = Vec::new();
    let h = entropy::shannon(&Distribution::exponential(E).unwrap()).unwrap();
    if h.abs() > 1e-12 {
        bad.push(format!("exp shannon at e = {h:e}"));
    }
    let mut pin = |name: &str, d: Distribution, want: f64| {
        let got = modified_shannon(&d).unwrap();
        if (got - want).abs() > 1e-10 {
            bad.push(format!("{name}: {got} vs {want}"));
        }
    };
    pin("normal", Distribution::normal(0.0, 1.0).unwrap(), (PI / 2.0).sqrt());
    for l in [0.3, 1.0, 4.0, 17.0] {
        pin("exp", Distribution::exponential(l).unwrap(), 1.0 / l);
        pin("laplace", Distribution::laplace(-1.0, l).unwrap(), 2.0 / l);
    }
    pin("chisq", Distribution::chi_squared(2).unwrap(), 2.0);
    pin("uniform", Distribution::uniform(-2.0, 3.5).unwrap(), 0.0);
    outcome(bad.is_empty(), if bad.is_empty() { "all pins within tolerance".into() } else { bad.join("; ") })
}

fn kl_nonnegativity() -> Outcome {
    let mut r = rng(DEFAULT_SEED);
    let (mut neg, mut iff, mut min) = (0, 0, f64::INFINITY);
    for i in 0..1000 {
        let family = CLOSED_FORM_FAMILIES[i % CLOSED_FORM_FAMILIES.len()];
        let pair = random_kl_pair(family, &mut r);
        let kl = kl_divergence(&pair).unwrap();
        min = min.min(kl);
        if kl < -1e-12 {
            neg += 1;
        }
        if (kl < 1e-12) != (pair.p() == pair.q()) {
            iff += 1;
        }
    }
    outcome(
        neg == 0 && iff == 0,
        format!("1000 pairs, min {min:.3e}, {neg} negative, {iff} zero/equality mismatches"),
    )
}

fn poisson_monotonicity() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, grid) in [
        ("linear", linear_grid(0.01, 100.0, 100)),
        ("log", log_grid(0.01, 100.0, 100)),
    ] {
        let h: Vec<f64> = grid.iter().map(|&l| poisson_entropy(l).unwrap()).collect();
        let d: Vec<f64> = grid.iter().map(|&l| poisson_entropy_derivative(l).unwrap()).collect();
        let good = strictly(&h, true) && d.iter().all(|&v| v > 0.0) && strictly(&d, false);
        ok &= good;
        notes.push(format!("{name} grid {}", if good { "ok" } else { "violated" }));
    }
    let d1000 = poisson_entropy_derivative(1000.0).unwrap();
    ok &= d1000 < 5e-3;
    notes.push(format!("H'(1000) = {d1000:.4e}"));
    outcome(ok, notes.join(", "))
}

fn gamma_monotonicity() -> Outcome {
    let grid = linear_grid(0.1, 10.0, 50);
    let h = |l: f64, m: f64| entropy::shannon(&Distribution::gamma(l, m).unwrap()).unwrap();
    let rows = grid
        .iter()
        .filter(|&&m| !strictly(&grid.iter().map(|&l| h(l, m)).collect::<Vec<_>>(), false))
        .count();
    let cols = grid
        .iter()
        .filter(|&&l| !strictly(&grid.iter().map(|&m| h(l, m)).collect::<Vec<_>>(), true))
        .count();
    outcome(
        rows == 0 && cols == 0,
        format!("50x50 grid: {rows} non-decreasing λ rows, {cols} non-increasing μ columns"),
    )
}

fn convergence_experiments() -> Outcome {
    let start = Instant::now();
    let bin = binomial_to_poisson(2.0, &[10, 100, 1000, 10000], 0.0, Exec::default()).unwrap();
    let nb = nb_to_logarithmic(0.5, &DEFAULT_R_GRID, Exec::default()).unwrap();
    let elapsed = start.elapsed();
    let fin = bin.final_error().unwrap();
    let ok = bin.eventually_decreasing(3)
        && fin < 1e-3
        && nb.eventually_decreasing(nb.rows.len())
        && elapsed < Duration::from_secs(30);
    let errs = |t: &entrokit::discrete::ConvergenceTable| {
        t.rows
            .iter()
            .map(|r| format!("{:.2e}", r.abs_error))
            .collect::<Vec<_>>()
            .join(" ")
    };
    outcome(
        ok,
        format!(
            "binomial errors [{}], nb errors [{}], {:.2}s",
            errs(&bin),
            errs(&nb),
            elapsed.as_secs_f64()
        ),
    )
}

fn gaussian_vectors() -> Outcome {
    let mut r = rng(DEFAULT_SEED);
    let (mut below, mut iff) = (0, 0);
    for _ in 0..1000 {
        let n = r.gen_range(2..=6);
        let m = random_psd(n, &mut r);
        let scale = m.diag_product();
        let gap = hadamard_gap(&m).unwrap();
        if gap < -1e-10 * scale {
            below += 1;
        }
        if (gap.abs() <= 1e-10 * scale) != m.is_diagonal() {
            iff += 1;
        }
    }
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let sweep = fgn_det_sweep(5, &grid, Exec::default()).unwrap();
    let at = |h: f64| sweep.iter().find(|row| row.hurst == h).unwrap();
    let half = at(0.5);
    let one = at(1.0);
    let in_range = sweep.iter().all(|row| (0.0..=1.0).contains(&row.det));
    let ok = below == 0
        && iff == 0
        && (half.det - 1.0).abs() <= 1e-12
        && one.det == 0.0
        && one.singular
        && in_range;
    outcome(
        ok,
        format!(
            "1000 matrices: {below} below bound, {iff} equality mismatches; fGn n=5 det(1/2) = {}, det(1) = {} (singular: {}), all in [0,1]: {in_range}",
            half.det, one.det, one.singular
        ),
    )
}

fn renyi_limit() -> Outcome {
    let reps = [
        Distribution::gamma(1.5, 2.5).unwrap(),
        Distribution::exponential(0.7).unwrap(),
        Distribution::chi_squared(3).unwrap(),
        Distribution::laplace(1.0, 2.0).unwrap(),
        Distribution::log_normal(0.5, 0.8).unwrap(),
        Distribution::normal(-1.0, 2.0).unwrap(),
        Distribution::uniform(0.0, 3.0).unwrap(),
    ];
    let mut worst = 0.0f64;
    for d in &reps {
        let h = entropy::shannon(d).unwrap();
        for a in [1.0 - 1e-4, 1.0 + 1e-4] {
            worst = worst.max((entropy::renyi(a, d).unwrap() - h).abs());
        }
    }
    outcome(worst <= 1e-3, format!("{} families, worst gap {worst:.3e}", reps.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", oracle_equivalence_core),
        ("value pins", value_pins),
        ("KL non-negativity", kl_nonnegativity),
        ("Poisson monotonicity", poisson_monotonicity),
        ("gamma monotonicity", gamma_monotonicity),
        ("convergence experiments", convergence_experiments),
        ("Gaussian vectors", gaussian_vectors),
        ("Renyi to Shannon limit", renyi_limit),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
