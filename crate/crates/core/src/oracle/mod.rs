//! Numerical ground truth for the closed forms.
//!
//! Nothing here touches a closed-form entropy, digamma or trigamma: continuous
//! measures come from adaptive quadrature of density functionals, discrete
//! ones from certified series over the pmf. Only the log-density itself (and
//! therefore log-gamma in its normalising constant) is shared with the
//! formulas under test.

pub mod quadrature;
pub mod series;

use crate::distribution::{Distribution, Params, Support};
use crate::error::{Error, Result};
use crate::measure::{EntropySpec, Measure};

pub use quadrature::Estimate;
pub use series::{SeriesSum, Transform};

/// Tolerances and budgets of the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub series_tail_tol: f64,
    pub max_terms: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            series_tail_tol: 1e-14,
            max_terms: 10_000_000,
        }
    }
}

impl OracleConfig {
    pub fn validated(self) -> Result<Self> {
        let check = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    requirement: "tolerance > 0",
                })
            }
        };
        check("abs_tol", self.abs_tol)?;
        check("rel_tol", self.rel_tol)?;
        check("series_tail_tol", self.series_tail_tol)?;
        if self.max_subdivisions == 0 || self.max_terms == 0 {
            return Err(Error::InvalidParameter {
                name: "budget",
                value: 0.0,
                requirement: "budgets >= 1",
            });
        }
        Ok(self)
    }
}

/// A location to split at and a width for the tail maps.
fn anchor(d: &Distribution) -> (f64, f64) {
    match d.params() {
        Params::Laplace { mu, lambda } => (mu, 1.0 / lambda),
        Params::Normal { mean, sigma2 } => (mean, sigma2.sqrt()),
        Params::LogNormal { m, sigma2 } => (m.exp(), sigma2.sqrt()),
        Params::Uniform { a, b } => (0.5 * (a + b), b - a),
        _ => {
            let (lambda, mu) = d.gamma_params().expect("continuous family");
            (mu / lambda, mu.sqrt() / lambda)
        }
    }
}

fn require_continuous(d: &Distribution, operation: &'static str) -> Result<Support> {
    d.support().ok_or(Error::FamilyMismatch {
        operation,
        expected: "continuous",
        found: d.family().tag(),
    })
}

/// `∫ g(log p(x)) dx` over the support of `d`, with `g(-∞)` taken as 0.
fn integrate_functional<G>(d: &Distribution, g: G, cfg: &OracleConfig) -> Result<Estimate>
where
    G: Fn(f64) -> f64,
{
    let support = require_continuous(d, "density integral")?;
    let f = |x: f64| {
        let lp = d.log_density(x);
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            g(lp)
        }
    };
    let (loc, scale) = anchor(d);
    match support {
        Support::PositiveHalfLine => {
            quadrature::integrate_positive(|x| if x > 0.0 { f(x) } else { 0.0 }, loc, cfg)
        }
        Support::RealLine => quadrature::integrate_real_line(f, &[loc], scale, cfg),
        Support::Interval(a, b) => quadrature::integrate_interval(f, a, b, cfg),
    }
}

/// `∫ p^α dx`.
pub fn integral_p_alpha(d: &Distribution, alpha: f64, cfg: &OracleConfig) -> Result<Estimate> {
    integrate_functional(d, |lp| (alpha * lp).exp(), cfg)
}

/// `∫ p^α log p dx`.
pub fn integral_p_alpha_log_p(d: &Distribution, alpha: f64, cfg: &OracleConfig) -> Result<Estimate> {
    integrate_functional(d, |lp| (alpha * lp).exp() * lp, cfg)
}

/// `∫ p log(p/q) dx` for two continuous members of one family.
pub fn kl_integral(p: &Distribution, q: &Distribution, cfg: &OracleConfig) -> Result<Estimate> {
    let support = require_continuous(p, "kl_integral")?;
    require_continuous(q, "kl_integral")?;
    if p.family() != q.family() {
        return Err(Error::CrossFamily {
            p: p.family().tag(),
            q: q.family().tag(),
        });
    }
    let f = |x: f64| {
        let lp = p.log_density(x);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        let lq = q.log_density(x);
        lp.exp() * (lp - lq)
    };
    let (loc_p, scale_p) = anchor(p);
    let (loc_q, scale_q) = anchor(q);
    match support {
        Support::PositiveHalfLine => {
            quadrature::integrate_positive(|x| if x > 0.0 { f(x) } else { 0.0 }, loc_p, cfg)
        }
        Support::RealLine => {
            quadrature::integrate_real_line(f, &[loc_p, loc_q], scale_p.min(scale_q), cfg)
        }
        Support::Interval(a, b) => match q.support() {
            Some(Support::Interval(c, e)) if c <= a && b <= e => {
                quadrature::integrate_interval(f, a, b, cfg)
            }
            _ => Ok(Estimate {
                value: f64::INFINITY,
                error: 0.0,
                subdivisions: 0,
            }),
        },
    }
}

/// `Σ_k transform(p_k)` with a certified tail, for discrete laws.
pub fn discrete_entropy_sum(d: &Distribution, transform: Transform, cfg: &OracleConfig) -> Result<SeriesSum> {
    series::discrete_transform_sum(d, transform, cfg)
}

/// `-∫ (p/M) log(p/M) dx` with `M` the density supremum.
pub fn modified_shannon_integral(d: &Distribution, cfg: &OracleConfig) -> Result<Estimate> {
    let m = d.density_sup()?.sup;
    let ln_m = m.ln();
    integrate_functional(
        d,
        |lp| {
            let ln_scaled = lp - ln_m;
            -ln_scaled.exp() * ln_scaled
        },
        cfg,
    )
}

/// Power sums and log-weighted power sums, continuous or discrete.
struct Moments<'a> {
    d: &'a Distribution,
    cfg: &'a OracleConfig,
}

impl Moments<'_> {
    fn power(&self, alpha: f64) -> Result<f64> {
        if self.d.is_discrete() {
            discrete_entropy_sum(self.d, Transform::PAlpha(alpha), self.cfg).map(|s| s.value)
        } else {
            integral_p_alpha(self.d, alpha, self.cfg).map(|e| e.value)
        }
    }

    fn power_log(&self, alpha: f64) -> Result<f64> {
        if self.d.is_discrete() {
            let t = if alpha == 1.0 {
                Transform::PLogP
            } else {
                Transform::PAlphaLogP(alpha)
            };
            discrete_entropy_sum(self.d, t, self.cfg).map(|s| s.value)
        } else {
            integral_p_alpha_log_p(self.d, alpha, self.cfg).map(|e| e.value)
        }
    }
}

/// Evaluates a measure straight from its definition.
pub fn measure_by_definition(spec: &EntropySpec, d: &Distribution, cfg: &OracleConfig) -> Result<f64> {
    let m = Moments { d, cfg };
    Ok(match spec.measure() {
        Measure::Shannon => -m.power_log(1.0)?,
        Measure::Renyi { alpha } => m.power(alpha)?.ln() / (1.0 - alpha),
        Measure::GeneralizedRenyi1 { alpha } => -m.power_log(alpha)? / m.power(alpha)?,
        Measure::Tsallis { alpha } => (m.power(alpha)? - 1.0) / (1.0 - alpha),
        Measure::GeneralizedRenyi2 { alpha, beta } => {
            (m.power(alpha)? / m.power(beta)?).ln() / (beta - alpha)
        }
        Measure::SharmaMittal { alpha, beta } => {
            (m.power(alpha)?.powf((1.0 - beta) / (1.0 - alpha)) - 1.0) / (1.0 - beta)
        }
        Measure::ModifiedShannon => {
            if d.is_discrete() {
                return Err(Error::FamilyMismatch {
                    operation: "modified_shannon",
                    expected: "continuous",
                    found: d.family().tag(),
                });
            }
            modified_shannon_integral(d, cfg)?.value
        }
    })
}
