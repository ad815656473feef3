//! Closed-form entropies, Kullback–Leibler divergences and modified Shannon
//! entropies.
//!
//! Continuous families use their analytic formulas. Chi-squared delegates to
//! `Gamma(1/2, ν/2)`. Discrete families have no closed forms, so they are
//! summed directly from the pmf with a certified tail (see
//! [`crate::oracle::series`]).
//!
//! Gamma-type escort integrals `∫ p^α` are finite only when `α(μ-1) > -1`;
//! outside that region every order-dependent measure returns
//! [`Error::OutsideValidity`] naming the violated inequality.

use crate::distribution::{Distribution, Family, Params};
use crate::error::{Error, Result};
use crate::measure::{EntropySpec, Measure};
use crate::oracle::{self, OracleConfig};
use crate::special::{ln_gamma, psi};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Evaluates `spec` for `d` by closed form.
pub fn evaluate(spec: &EntropySpec, d: &Distribution) -> Result<f64> {
    if spec.measure() == Measure::ModifiedShannon {
        return modified_shannon(d);
    }
    if d.is_discrete() {
        return oracle::measure_by_definition(spec, d, &OracleConfig::default());
    }
    match d.params() {
        Params::Exponential { lambda } => Ok(exponential(spec, lambda)),
        Params::Laplace { lambda, .. } => Ok(laplace(spec, lambda)),
        Params::LogNormal { m, sigma2 } => Ok(log_normal(spec, m, sigma2)),
        Params::Gamma { lambda, mu } => GammaLaw::new(lambda, mu, Family::Gamma, "μ").eval(spec),
        Params::ChiSquared { nu } => {
            GammaLaw::new(0.5, nu as f64 / 2.0, Family::ChiSquared, "ν/2").eval(spec)
        }
        Params::Normal { sigma2, .. } => Ok(normal(spec, sigma2)),
        Params::Uniform { a, b } => Ok(uniform(spec, b - a)),
        _ => unreachable!("discrete families handled above"),
    }
}

pub fn shannon(d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::shannon(), d)
}

pub fn renyi(alpha: f64, d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::renyi(alpha)?, d)
}

/// One-parameter generalized Rényi entropy `-∫p^α log p / ∫p^α`.
pub fn generalized_renyi1(alpha: f64, d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::generalized_renyi1(alpha)?, d)
}

pub fn tsallis(alpha: f64, d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::tsallis(alpha)?, d)
}

/// Two-parameter generalized Rényi entropy `log(∫p^α / ∫p^β)/(β-α)`;
/// symmetric in `(α, β)`.
pub fn generalized_renyi2(alpha: f64, beta: f64, d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::generalized_renyi2(alpha, beta)?, d)
}

pub fn sharma_mittal(alpha: f64, beta: f64, d: &Distribution) -> Result<f64> {
    evaluate(&EntropySpec::sharma_mittal(alpha, beta)?, d)
}

/// Shannon entropy of `p/M`, where `M = sup p`:
/// `H/M + log(M)/M`.
pub fn modified_shannon(d: &Distribution) -> Result<f64> {
    if d.is_discrete() {
        return Err(Error::FamilyMismatch {
            operation: "modified_shannon",
            expected: "continuous",
            found: d.family().tag(),
        });
    }
    let m = d.density_sup()?.sup;
    let h = shannon(d)?;
    Ok((h + m.ln()) / m)
}

fn exponential(spec: &EntropySpec, lambda: f64) -> f64 {
    let ln_l = lambda.ln();
    match spec.measure() {
        Measure::Shannon => 1.0 - ln_l,
        Measure::Renyi { alpha } => -ln_l + alpha.ln() / (alpha - 1.0),
        Measure::GeneralizedRenyi1 { alpha } => -ln_l + 1.0 / alpha,
        Measure::Tsallis { alpha } => {
            (lambda.powf(alpha - 1.0) - alpha) / (alpha * (1.0 - alpha))
        }
        Measure::GeneralizedRenyi2 { alpha, beta } => {
            -ln_l + (beta / alpha).ln() / (beta - alpha)
        }
        Measure::SharmaMittal { alpha, beta } => {
            let ln_inner = (beta - 1.0) * ln_l + (1.0 - beta) / (alpha - 1.0) * alpha.ln();
            ln_inner.exp_m1() / (1.0 - beta)
        }
        Measure::ModifiedShannon => unreachable!(),
    }
}

fn laplace(spec: &EntropySpec, lambda: f64) -> f64 {
    // every formula is the exponential one with λ replaced by λ/2
    exponential(spec, 0.5 * lambda)
}

fn log_normal(spec: &EntropySpec, m: f64, sigma2: f64) -> f64 {
    // log σ + ½ log 2π + m
    let base = 0.5 * sigma2.ln() + HALF_LN_2PI + m;
    match spec.measure() {
        Measure::Shannon => base + 0.5,
        Measure::Renyi { alpha } => {
            base + alpha.ln() / (2.0 * (alpha - 1.0)) + sigma2 * (1.0 - alpha) / (2.0 * alpha)
        }
        Measure::GeneralizedRenyi1 { alpha } => {
            base + 1.0 / (2.0 * alpha) + sigma2 * (1.0 - alpha * alpha) / (2.0 * alpha * alpha)
        }
        Measure::Tsallis { alpha } => {
            // σ^{1-α} (2π)^{(1-α)/2} α^{-1/2} exp{m(1-α) + σ²(1-α)²/(2α)}
            let ln_j = (1.0 - alpha) * (0.5 * sigma2.ln() + HALF_LN_2PI) - 0.5 * alpha.ln()
                + m * (1.0 - alpha)
                + sigma2 * (1.0 - alpha).powi(2) / (2.0 * alpha);
            ln_j.exp_m1() / (1.0 - alpha)
        }
        Measure::GeneralizedRenyi2 { alpha, beta } => {
            base + (beta.ln() - alpha.ln()) / (2.0 * (beta - alpha))
                + sigma2 * (1.0 - alpha * beta) / (2.0 * alpha * beta)
        }
        Measure::SharmaMittal { alpha, beta } => {
            let ln_inner = (1.0 - beta) * (0.5 * sigma2.ln() + HALF_LN_2PI)
                - (1.0 - beta) / (2.0 * (1.0 - alpha)) * alpha.ln()
                + m * (1.0 - beta)
                + sigma2 * (1.0 - alpha) * (1.0 - beta) / (2.0 * alpha);
            ln_inner.exp_m1() / (1.0 - beta)
        }
        Measure::ModifiedShannon => unreachable!(),
    }
}

/// Power integral `∫p^α = (2πσ²)^{(1-α)/2} α^{-1/2}`.
fn normal(spec: &EntropySpec, sigma2: f64) -> f64 {
    let half_ln_var = 0.5 * sigma2.ln() + HALF_LN_2PI;
    let ln_j = |a: f64| (1.0 - a) * half_ln_var - 0.5 * a.ln();
    match spec.measure() {
        Measure::Shannon => half_ln_var + 0.5,
        Measure::Renyi { alpha } => half_ln_var + alpha.ln() / (2.0 * (alpha - 1.0)),
        Measure::GeneralizedRenyi1 { alpha } => half_ln_var + 1.0 / (2.0 * alpha),
        Measure::Tsallis { alpha } => ln_j(alpha).exp_m1() / (1.0 - alpha),
        Measure::GeneralizedRenyi2 { alpha, beta } => {
            half_ln_var + (beta.ln() - alpha.ln()) / (2.0 * (beta - alpha))
        }
        Measure::SharmaMittal { alpha, beta } => {
            ((1.0 - beta) / (1.0 - alpha) * ln_j(alpha)).exp_m1() / (1.0 - beta)
        }
        Measure::ModifiedShannon => unreachable!(),
    }
}

/// Power integral `∫p^α = w^{1-α}` for width `w`.
fn uniform(spec: &EntropySpec, width: f64) -> f64 {
    let ln_w = width.ln();
    match spec.measure() {
        Measure::Shannon
        | Measure::Renyi { .. }
        | Measure::GeneralizedRenyi1 { .. }
        | Measure::GeneralizedRenyi2 { .. } => ln_w,
        Measure::Tsallis { alpha } => ((1.0 - alpha) * ln_w).exp_m1() / (1.0 - alpha),
        Measure::SharmaMittal { beta, .. } => ((1.0 - beta) * ln_w).exp_m1() / (1.0 - beta),
        Measure::ModifiedShannon => unreachable!(),
    }
}

/// `Gamma(λ, μ)` formulas, also serving chi-squared.
struct GammaLaw {
    lambda: f64,
    mu: f64,
    family: Family,
    shape_label: &'static str,
}

impl GammaLaw {
    fn new(lambda: f64, mu: f64, family: Family, shape_label: &'static str) -> Self {
        Self {
            lambda,
            mu,
            family,
            shape_label,
        }
    }

    /// Requires `order·(μ-1) > -1`.
    fn check(&self, measure: &'static str, name: &str, order: f64) -> Result<()> {
        if order * (self.mu - 1.0) > -1.0 {
            Ok(())
        } else {
            let shape = match self.shape_label {
                "μ" => String::new(),
                label => format!("{label} = "),
            };
            Err(Error::OutsideValidity {
                measure,
                family: self.family.tag(),
                violated: format!(
                    "{name}(μ−1) ≤ −1 with {name} = {order}, μ = {shape}{}",
                    self.mu
                ),
            })
        }
    }

    /// `log ∫ p^α = (α-1) log λ - (α(μ-1)+1) log α + log Γ(α(μ-1)+1) - α log Γ(μ)`
    fn ln_power_integral(&self, alpha: f64) -> f64 {
        let s1 = alpha * (self.mu - 1.0) + 1.0;
        (alpha - 1.0) * self.lambda.ln() - s1 * alpha.ln() + ln_gamma(s1)
            - alpha * ln_gamma(self.mu)
    }

    fn eval(&self, spec: &EntropySpec) -> Result<f64> {
        let (lambda, mu) = (self.lambda, self.mu);
        let ln_l = lambda.ln();
        let lg_mu = ln_gamma(mu);
        let tag = spec.kind().tag();
        Ok(match spec.measure() {
            Measure::Shannon => -ln_l + lg_mu + mu - psi(mu) * (mu - 1.0),
            Measure::Renyi { alpha } => {
                self.check(tag, "α", alpha)?;
                let s1 = alpha * (mu - 1.0) + 1.0;
                -ln_l - (alpha * lg_mu - ln_gamma(s1)) / (1.0 - alpha)
                    - (1.0 - alpha + alpha * mu) / (1.0 - alpha) * alpha.ln()
            }
            Measure::GeneralizedRenyi1 { alpha } => {
                self.check(tag, "α", alpha)?;
                let s1 = alpha * (mu - 1.0) + 1.0;
                -ln_l + lg_mu + (mu - 1.0) * alpha.ln() - (mu - 1.0) * psi(s1) + mu - 1.0
                    + 1.0 / alpha
            }
            Measure::Tsallis { alpha } => {
                self.check(tag, "α", alpha)?;
                self.ln_power_integral(alpha).exp_m1() / (1.0 - alpha)
            }
            Measure::GeneralizedRenyi2 { alpha, beta } => {
                self.check(tag, "α", alpha)?;
                self.check(tag, "β", beta)?;
                let sa = alpha * (mu - 1.0) + 1.0;
                let sb = beta * (mu - 1.0) + 1.0;
                -ln_l
                    + (sb * beta.ln() - sa * alpha.ln() + ln_gamma(sa) - ln_gamma(sb))
                        / (beta - alpha)
                    + lg_mu
            }
            Measure::SharmaMittal { alpha, beta } => {
                self.check(tag, "α", alpha)?;
                let s1 = alpha * (mu - 1.0) + 1.0;
                let e = (1.0 - beta) / (1.0 - alpha);
                // λ^{β-1} α^{(α(1-μ)-1)e} Γ(s1)^e / Γ(μ)^{αe}
                let ln_inner = (beta - 1.0) * ln_l - s1 * e * alpha.ln() + e * ln_gamma(s1)
                    - alpha * e * lg_mu;
                ln_inner.exp_m1() / (1.0 - beta)
            }
            Measure::ModifiedShannon => unreachable!(),
        })
    }
}

/// Two members of one family, ordered as `KL(p ‖ q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlPair {
    p: Distribution,
    q: Distribution,
}

impl KlPair {
    pub fn new(p: Distribution, q: Distribution) -> Result<Self> {
        if p.family() != q.family() {
            return Err(Error::CrossFamily {
                p: p.family().tag(),
                q: q.family().tag(),
            });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &Distribution {
        &self.p
    }

    pub fn q(&self) -> &Distribution {
        &self.q
    }
}

/// Closed-form `KL(p ‖ q) = ∫ p log(p/q)` for Gamma, Exponential,
/// ChiSquared, Laplace and LogNormal pairs.
pub fn kl_divergence(pair: &KlPair) -> Result<f64> {
    use Params::*;
    Ok(match (pair.p.params(), pair.q.params()) {
        (Exponential { lambda: l }, Exponential { lambda: l1 }) => (l / l1).ln() + l1 / l - 1.0,
        (Gamma { lambda: l, mu }, Gamma { lambda: l1, mu: mu1 }) => gamma_kl(l, mu, l1, mu1),
        (ChiSquared { nu }, ChiSquared { nu: nu1 }) => {
            gamma_kl(0.5, nu as f64 / 2.0, 0.5, nu1 as f64 / 2.0)
        }
        (Laplace { mu, lambda: l }, Laplace { mu: mu1, lambda: l1 }) => {
            let gap = (mu - mu1).abs();
            (l / l1).ln() + l1 / l * (l * gap + (-l * gap).exp()) - 1.0
        }
        (LogNormal { m, sigma2 }, LogNormal { m: m1, sigma2: s1 }) => {
            0.5 * (s1 / sigma2).ln() + (sigma2 - s1 + (m - m1).powi(2)) / (2.0 * s1)
        }
        _ => return Err(Error::UnsupportedKl(pair.p.family().tag())),
    })
}

fn gamma_kl(l: f64, mu: f64, l1: f64, mu1: f64) -> f64 {
    mu1 * (l / l1).ln() + mu * (l1 / l - 1.0) + ln_gamma(mu1) - ln_gamma(mu)
        + (mu - mu1) * psi(mu)
}

/// Which log-normal expectation [`lognormal_moment`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `E X^p`
    Plain,
    /// `E[X^p log X]`
    TimesLog,
    /// `E[X^p (log X - m)²]`
    TimesCenteredSq,
}

/// Expectations of `X^p`-weighted functions of a `LogNormal(m, σ²)` variable.
pub fn lognormal_moment(p: f64, m: f64, sigma2: f64, kind: MomentKind) -> Result<f64> {
    let d = Distribution::log_normal(m, sigma2)?;
    let _ = d;
    let base = (m * p + 0.5 * sigma2 * p * p).exp();
    Ok(match kind {
        MomentKind::Plain => base,
        MomentKind::TimesLog => (sigma2 * p + m) * base,
        MomentKind::TimesCenteredSq => sigma2 * (sigma2 * p * p + 1.0) * base,
    })
}
