//! Poisson entropy analysis and discrete convergence experiments.

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::series::{certified_sum, geometric_tail, SeriesSum, Transform};
use crate::oracle::{discrete_entropy_sum, OracleConfig};
use crate::special::{ln_factorial, ln_poisson_pmf};

/// One line of a convergence or sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub driver: f64,
    pub approx: f64,
    pub limit: f64,
    pub abs_error: f64,
}

impl ExperimentRow {
    pub fn new(driver: f64, approx: f64, limit: f64) -> Self {
        Self {
            driver,
            approx,
            limit,
            abs_error: (approx - limit).abs(),
        }
    }
}

/// Rows in grid order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ExperimentRow>,
}

impl ConvergenceTable {
    pub fn final_error(&self) -> Option<f64> {
        self.rows.last().map(|r| r.abs_error)
    }

    /// True when the error strictly decreases over the last `m` rows.
    pub fn eventually_decreasing(&self, m: usize) -> bool {
        let m = m.min(self.rows.len());
        let tail = &self.rows[self.rows.len() - m..];
        tail.windows(2).all(|w| w[1].abs_error < w[0].abs_error)
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            requirement: "> 0",
        })
    }
}

/// Poisson Shannon entropy
/// `-λ log(λ/e) + e^{-λ} Σ_{k≥2} λ^k log k! / k!`.
pub fn poisson_entropy(lambda: f64) -> Result<f64> {
    Ok(poisson_entropy_with(lambda, &OracleConfig::default())?.value)
}

pub fn poisson_entropy_with(lambda: f64, cfg: &OracleConfig) -> Result<SeriesSum> {
    let lambda = positive("lambda", lambda)?;
    let ln_l = lambda.ln();
    // t_{k+1}/t_k = λ/(k+1) · log(k+1)!/log k!, both factors decreasing in k
    let series = certified_sum(2, None, cfg, |k| {
        let lf = ln_factorial(k);
        let t = ln_poisson_pmf(k, lambda).exp() * lf;
        let rho = lambda / (k as f64 + 1.0) * ln_factorial(k + 1) / lf;
        (t, geometric_tail(t, rho))
    })?;
    Ok(SeriesSum {
        value: -lambda * (ln_l - 1.0) + series.value,
        ..series
    })
}

/// `dH/dλ = e^{-λ} Σ_{i≥1} λ^i/i! · log(i+1) - log λ`.
pub fn poisson_entropy_derivative(lambda: f64) -> Result<f64> {
    Ok(poisson_entropy_derivative_with(lambda, &OracleConfig::default())?.value)
}

pub fn poisson_entropy_derivative_with(lambda: f64, cfg: &OracleConfig) -> Result<SeriesSum> {
    let lambda = positive("lambda", lambda)?;
    let s = log_weighted_series(lambda, cfg)?;
    Ok(SeriesSum {
        value: s.value - lambda.ln(),
        ..s
    })
}

/// `e^{-λ} Σ_{i≥1} λ^i log(i+1) / i!`
fn log_weighted_series(lambda: f64, cfg: &OracleConfig) -> Result<SeriesSum> {
    certified_sum(1, None, cfg, |i| {
        let fi = i as f64;
        let lg = (fi + 1.0).ln();
        let t = ln_poisson_pmf(i, lambda).exp() * lg;
        let rho = lambda / (fi + 1.0) * (fi + 2.0).ln() / lg;
        (t, geometric_tail(t, rho))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub lambda: f64,
    pub value: f64,
}

/// `e^{-λ} Σ λ^i log(i+1)/i!` along an increasing λ-grid.
///
/// The sum diverges like `log λ`; in particular it eventually exceeds
/// `log(N+1)` for every fixed `N`.
pub fn log_weighted_growth(grid: &[f64], exec: Exec) -> Result<Vec<GrowthRow>> {
    strictly_monotone(grid, true)?;
    let cfg = OracleConfig::default();
    exec.try_map(grid, |&lambda| {
        let lambda = positive("lambda", lambda)?;
        Ok(GrowthRow {
            lambda,
            value: log_weighted_series(lambda, &cfg)?.value,
        })
    })
}

fn strictly_monotone(grid: &[f64], increasing: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let ok = grid
        .windows(2)
        .all(|w| if increasing { w[0] < w[1] } else { w[0] > w[1] });
    if ok {
        Ok(())
    } else {
        let dir = if increasing { "increasing" } else { "decreasing" };
        Err(Error::InvalidGrid(format!("grid must be strictly {dir}")))
    }
}

fn shannon_series(d: &Distribution, cfg: &OracleConfig) -> Result<f64> {
    Ok(-discrete_entropy_sum(d, Transform::PLogP, cfg)?.value)
}

/// Binomial(n, p_n) entropies against the Poisson(λ) limit, with
/// `p_n = λ/n · (1 + c/n)`. `c = 0` is the plain scheme.
pub fn binomial_to_poisson(
    lambda: f64,
    n_grid: &[u64],
    perturbation: f64,
    exec: Exec,
) -> Result<ConvergenceTable> {
    let lambda = positive("lambda", lambda)?;
    if !perturbation.is_finite() {
        return Err(Error::InvalidParameter {
            name: "perturbation",
            value: perturbation,
            requirement: "finite",
        });
    }
    let grid: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
    strictly_monotone(&grid, true)?;
    let mut dists = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let nf = n as f64;
        let p = lambda / nf * (1.0 + perturbation / nf);
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "n = {n} gives p_n = {p}, outside (0, 1)"
            )));
        }
        dists.push(Distribution::binomial(n, p)?);
    }
    let cfg = OracleConfig::default();
    let limit = poisson_entropy(lambda)?;
    let rows = exec.try_map(&dists, |d| {
        let n = d.values()[0];
        Ok::<_, Error>(ExperimentRow::new(n, shannon_series(d, &cfg)?, limit))
    })?;
    Ok(ConvergenceTable { rows })
}

/// Conditional negative binomial `(p, r)` entropies against the
/// Logarithmic(p) limit as `r → 0`. The grid must be strictly decreasing in
/// `(0, 1/2)`.
pub fn nb_to_logarithmic(p: f64, r_grid: &[f64], exec: Exec) -> Result<ConvergenceTable> {
    let target = Distribution::logarithmic(p)?;
    strictly_monotone(r_grid, false)?;
    if let Some(&r) = r_grid.iter().find(|&&r| !(r > 0.0 && r < 0.5)) {
        return Err(Error::InvalidGrid(format!("r = {r} outside (0, 1/2)")));
    }
    let cfg = OracleConfig::default();
    let limit = shannon_series(&target, &cfg)?;
    let rows = exec.try_map(r_grid, |&r| {
        let d = Distribution::nb_conditional(p, r)?;
        Ok::<_, Error>(ExperimentRow::new(r, shannon_series(&d, &cfg)?, limit))
    })?;
    Ok(ConvergenceTable { rows })
}

/// Default `r`-grid for [`nb_to_logarithmic`].
pub const DEFAULT_R_GRID: [f64; 4] = [0.4, 0.1, 0.01, 0.001];
