//! Truncated series with a certified tail bound.
//!
//! A sum is stopped at index `k` only once an upper bound on `Σ_{j>k} |t_j|`
//! is below the configured tolerance. The bound always comes from a ratio
//! test: the caller supplies `ρ ≥ sup_{j≥k} t_{j+1}/t_j`, valid from `k`
//! onwards, and the tail is then at most `t_k ρ / (1 - ρ)`.

use super::OracleConfig;
use crate::distribution::{Distribution, Params};
use crate::error::{Error, Result};
use crate::special::{ln_binomial_pmf, ln_factorial, ln_gamma, ln_poisson_pmf};

/// Result of a certified summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Upper bound on the absolute value of the discarded tail.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Per-term transform applied to a probability mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    /// `p log p`
    PLogP,
    /// `p^α`
    PAlpha(f64),
    /// `p^α log p`
    PAlphaLogP(f64),
}

impl Transform {
    fn apply(self, ln_p: f64) -> f64 {
        if ln_p == f64::NEG_INFINITY {
            return 0.0;
        }
        match self {
            Transform::PLogP => ln_p.exp() * ln_p,
            Transform::PAlpha(a) => (a * ln_p).exp(),
            Transform::PAlphaLogP(a) => (a * ln_p).exp() * ln_p,
        }
    }

    /// `(C, s)` with `|transform(p)| ≤ C p^s` on `(0, 1]`.
    ///
    /// `|p^a log p| = p^{a/2} (p^{a/2} |log p|) ≤ p^{a/2} · 2/(a e)`.
    fn envelope(self) -> (f64, f64) {
        use std::f64::consts::E;
        match self {
            Transform::PLogP => (2.0 / E, 0.5),
            Transform::PAlpha(a) => (1.0, a),
            Transform::PAlphaLogP(a) => (2.0 / (a * E), 0.5 * a),
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums `t_start + t_{start+1} + ...`.
///
/// `step(k)` returns the term `t_k` and, when available, an upper bound on
/// the tail `Σ_{j>k} |t_j|`. Summation ends at the first `k` whose bound is
/// at most `cfg.series_tail_tol`, or after `last` (a finite support) with a
/// zero tail.
pub fn certified_sum<F>(start: u64, last: Option<u64>, cfg: &super::OracleConfig, mut step: F) -> Result<SeriesSum>
where
    F: FnMut(u64) -> (f64, Option<f64>),
{
    let mut acc = Accumulator::default();
    let mut k = start;
    let mut terms = 0usize;
    let mut last_bound = f64::INFINITY;
    loop {
        let (term, tail) = step(k);
        acc.add(term);
        terms += 1;
        if last == Some(k) {
            return Ok(SeriesSum {
                value: acc.value(),
                tail_bound: 0.0,
                terms,
            });
        }
        if let Some(bound) = tail {
            last_bound = bound;
            if bound <= cfg.series_tail_tol {
                return Ok(SeriesSum {
                    value: acc.value(),
                    tail_bound: bound,
                    terms,
                });
            }
        }
        if terms >= cfg.max_terms {
            return Err(Error::SeriesBudget {
                terms,
                tail_bound: last_bound,
            });
        }
        k += 1;
    }
}

/// Tail of a geometric majorant: `Σ_{j≥1} a ρ^j`, or `None` if `ρ ≥ 1`.
pub(crate) fn geometric_tail(a: f64, rho: f64) -> Option<f64> {
    (rho < 1.0).then(|| a * rho / (1.0 - rho))
}

/// Support bounds and pmf ratio bounds of the discrete families.
pub(crate) struct DiscreteLaw {
    params: Params,
}

impl DiscreteLaw {
    pub(crate) fn new(d: &Distribution) -> Result<Self> {
        if !d.is_discrete() {
            return Err(Error::FamilyMismatch {
                operation: "discrete sum",
                expected: "discrete",
                found: d.family().tag(),
            });
        }
        Ok(Self { params: d.params() })
    }

    pub(crate) fn first(&self) -> u64 {
        match self.params {
            Params::NegBinomialConditional { .. } | Params::Logarithmic { .. } => 1,
            _ => 0,
        }
    }

    pub(crate) fn last(&self) -> Option<u64> {
        match self.params {
            Params::Binomial { n, .. } => Some(n),
            _ => None,
        }
    }

    /// An upper bound on `sup_{j≥k} p_{j+1}/p_j`.
    pub(crate) fn ratio_bound(&self, k: u64) -> f64 {
        let kf = k as f64;
        match self.params {
            Params::Poisson { lambda } => lambda / (kf + 1.0),
            Params::Binomial { n, p } => {
                if k >= n {
                    0.0
                } else {
                    (n - k) as f64 / (kf + 1.0) * p / (1.0 - p)
                }
            }
            Params::NegBinomialConditional { p, r } => {
                (1.0 - p) * ((kf + r) / (kf + 1.0)).max(1.0)
            }
            Params::Logarithmic { p } => 1.0 - p,
            _ => unreachable!(),
        }
    }

    /// Sequential log-pmf evaluation; `next` must be called with
    /// consecutive `k` starting at [`DiscreteLaw::first`].
    pub(crate) fn walker(&self) -> LnPmfWalker {
        LnPmfWalker {
            params: self.params,
            prev: None,
        }
    }
}

pub(crate) struct LnPmfWalker {
    params: Params,
    prev: Option<(u64, f64)>,
}

impl LnPmfWalker {
    pub(crate) fn ln_pmf(&mut self, k: u64) -> f64 {
        let kf = k as f64;
        let value = match self.params {
            Params::Poisson { lambda } => ln_poisson_pmf(k, lambda),
            Params::Binomial { n, p } => ln_binomial_pmf(k, n, p),
            Params::NegBinomialConditional { p, r } => match self.prev {
                // p_{k+1}/p_k = (k + r)/(k + 1) (1 - p)
                Some((j, lp)) if j + 1 == k => {
                    let jf = j as f64;
                    lp + ((jf + r) / (jf + 1.0)).ln() + (1.0 - p).ln()
                }
                _ => {
                    ln_gamma(kf + r) - ln_factorial(k) - ln_gamma(r)
                        + kf * (1.0 - p).ln()
                        + r * p.ln()
                        - (-(r * p.ln()).exp_m1()).ln()
                }
            },
            Params::Logarithmic { p } => kf * (1.0 - p).ln() - kf.ln() - (-p.ln()).ln(),
            _ => unreachable!(),
        };
        self.prev = Some((k, value));
        value
    }
}

/// `Σ_k transform(p_k)` over the support of a discrete law.
pub fn discrete_transform_sum(d: &Distribution, transform: Transform, cfg: &OracleConfig) -> Result<SeriesSum> {
    if let Transform::PAlpha(a) | Transform::PAlphaLogP(a) = transform {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidOrder {
                measure: "discrete power sum",
                violated: format!("α = {a} is not > 0"),
            });
        }
    }
    let law = DiscreteLaw::new(d)?;
    let mut walker = law.walker();
    let (scale, power) = transform.envelope();
    certified_sum(law.first(), law.last(), cfg, |k| {
        let ln_p = walker.ln_pmf(k);
        let term = transform.apply(ln_p);
        let rho = law.ratio_bound(k);
        // tail of Σ C p_j^s with p_{k+j} ≤ p_k ρ^j
        let tail = if rho < 1.0 {
            geometric_tail(scale * (power * ln_p).exp(), rho.powf(power))
        } else {
            None
        };
        (term, tail)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn binomial_entropy_exact() {
        let d = Distribution::binomial(2, 0.5).unwrap();
        let s = discrete_transform_sum(&d, Transform::PLogP, &cfg()).unwrap();
        assert_abs_diff_eq!(-s.value, 1.5 * 2f64.ln(), epsilon = 1e-15);
        assert_eq!(s.tail_bound, 0.0);
    }

    #[test]
    fn masses_sum_to_one() {
        for d in [
            Distribution::poisson(0.3).unwrap(),
            Distribution::poisson(250.0).unwrap(),
            Distribution::binomial(40, 0.7).unwrap(),
            Distribution::nb_conditional(0.4, 0.1).unwrap(),
            Distribution::nb_conditional(0.2, 3.5).unwrap(),
            Distribution::logarithmic(0.05).unwrap(),
        ] {
            let s = discrete_transform_sum(&d, Transform::PAlpha(1.0), &cfg()).unwrap();
            assert_abs_diff_eq!(s.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn walker_matches_direct_pmf() {
        let d = Distribution::nb_conditional(0.3, 0.7).unwrap();
        let law = DiscreteLaw::new(&d).unwrap();
        let mut w = law.walker();
        for k in 1..60 {
            let lp = w.ln_pmf(k);
            assert_abs_diff_eq!(lp, d.ln_pmf(k).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn budget_error() {
        let tiny = OracleConfig {
            max_terms: 3,
            ..OracleConfig::default()
        };
        let d = Distribution::logarithmic(0.01).unwrap();
        assert!(matches!(
            discrete_transform_sum(&d, Transform::PLogP, &tiny),
            Err(Error::SeriesBudget { .. })
        ));
    }

    #[test]
    fn continuous_is_rejected() {
        let d = Distribution::exponential(1.0).unwrap();
        assert!(discrete_transform_sum(&d, Transform::PLogP, &cfg()).is_err());
    }
}
