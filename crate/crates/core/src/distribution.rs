//! Parameter records for the eleven supported families.
//!
//! A [`Distribution`] can only be obtained through a validating constructor
//! (or by parsing the textual `family:key=value,...` syntax), so every value
//! that reaches the entropy code satisfies its family's parameter ranges.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::{ln_binomial_pmf, ln_factorial, ln_gamma, ln_poisson_pmf};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gamma,
    Exponential,
    ChiSquared,
    Laplace,
    LogNormal,
    Normal,
    Uniform,
    Poisson,
    Binomial,
    NegBinomialConditional,
    Logarithmic,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Gamma,
        Family::Exponential,
        Family::ChiSquared,
        Family::Laplace,
        Family::LogNormal,
        Family::Normal,
        Family::Uniform,
        Family::Poisson,
        Family::Binomial,
        Family::NegBinomialConditional,
        Family::Logarithmic,
    ];

    /// Short tag used by the textual syntax.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Gamma => "gamma",
            Family::Exponential => "exp",
            Family::ChiSquared => "chisq",
            Family::Laplace => "laplace",
            Family::LogNormal => "lognormal",
            Family::Normal => "normal",
            Family::Uniform => "uniform",
            Family::Poisson => "poisson",
            Family::Binomial => "binomial",
            Family::NegBinomialConditional => "nbcond",
            Family::Logarithmic => "logarithmic",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.tag() == tag)
    }

    pub fn is_discrete(self) -> bool {
        matches!(
            self,
            Family::Poisson
                | Family::Binomial
                | Family::NegBinomialConditional
                | Family::Logarithmic
        )
    }

    /// Parameter names in textual-syntax order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Gamma => &["lambda", "mu"],
            Family::Exponential => &["lambda"],
            Family::ChiSquared => &["nu"],
            Family::Laplace => &["mu", "lambda"],
            Family::LogNormal => &["m", "sigma2"],
            Family::Normal => &["mean", "sigma2"],
            Family::Uniform => &["a", "b"],
            Family::Poisson => &["lambda"],
            Family::Binomial => &["n", "p"],
            Family::NegBinomialConditional => &["p", "r"],
            Family::Logarithmic => &["p"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Raw parameters of a validated distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Gamma { lambda: f64, mu: f64 },
    Exponential { lambda: f64 },
    ChiSquared { nu: u32 },
    Laplace { mu: f64, lambda: f64 },
    LogNormal { m: f64, sigma2: f64 },
    Normal { mean: f64, sigma2: f64 },
    Uniform { a: f64, b: f64 },
    Poisson { lambda: f64 },
    Binomial { n: u64, p: f64 },
    NegBinomialConditional { p: f64, r: f64 },
    Logarithmic { p: f64 },
}

/// Where a continuous density lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// `(0, ∞)`
    PositiveHalfLine,
    /// `ℝ`
    RealLine,
    /// `[a, b]`
    Interval(f64, f64),
}

/// Supremum of a bounded density and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBound {
    pub sup: f64,
    /// `None` when the supremum is attained on a whole interval.
    pub attained_at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distribution(Params);

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "finite value > 0",
        })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "finite value",
        })
    }
}

fn probability(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "0 < value < 1",
        })
    }
}

impl Distribution {
    pub fn gamma(lambda: f64, mu: f64) -> Result<Self> {
        Ok(Self(Params::Gamma {
            lambda: positive("lambda", lambda)?,
            mu: positive("mu", mu)?,
        }))
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        Ok(Self(Params::Exponential {
            lambda: positive("lambda", lambda)?,
        }))
    }

    pub fn chi_squared(nu: u32) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidParameter {
                name: "nu",
                value: 0.0,
                requirement: "integer nu >= 1",
            });
        }
        Ok(Self(Params::ChiSquared { nu }))
    }

    pub fn laplace(mu: f64, lambda: f64) -> Result<Self> {
        Ok(Self(Params::Laplace {
            mu: finite("mu", mu)?,
            lambda: positive("lambda", lambda)?,
        }))
    }

    pub fn log_normal(m: f64, sigma2: f64) -> Result<Self> {
        Ok(Self(Params::LogNormal {
            m: finite("m", m)?,
            sigma2: positive("sigma2", sigma2)?,
        }))
    }

    pub fn normal(mean: f64, sigma2: f64) -> Result<Self> {
        Ok(Self(Params::Normal {
            mean: finite("mean", mean)?,
            sigma2: positive("sigma2", sigma2)?,
        }))
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        finite("a", a)?;
        finite("b", b)?;
        if a >= b {
            return Err(Error::InvalidParameter {
                name: "b",
                value: b,
                requirement: "a < b",
            });
        }
        Ok(Self(Params::Uniform { a, b }))
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Ok(Self(Params::Poisson {
            lambda: positive("lambda", lambda)?,
        }))
    }

    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                requirement: "integer n >= 1",
            });
        }
        Ok(Self(Params::Binomial {
            n,
            p: probability("p", p)?,
        }))
    }

    /// Negative binomial conditioned on `X > 0`.
    pub fn nb_conditional(p: f64, r: f64) -> Result<Self> {
        Ok(Self(Params::NegBinomialConditional {
            p: probability("p", p)?,
            r: positive("r", r)?,
        }))
    }

    pub fn logarithmic(p: f64) -> Result<Self> {
        Ok(Self(Params::Logarithmic {
            p: probability("p", p)?,
        }))
    }

    /// Rebuilds a distribution of `family` from raw values in
    /// [`Family::param_names`] order.
    pub fn from_values(family: Family, values: &[f64]) -> Result<Self> {
        let want = family.param_names().len();
        if values.len() != want {
            return Err(Error::Parse(format!(
                "{family} takes {want} parameter(s), got {}",
                values.len()
            )));
        }
        let v = values;
        match family {
            Family::Gamma => Self::gamma(v[0], v[1]),
            Family::Exponential => Self::exponential(v[0]),
            Family::ChiSquared => Self::chi_squared(as_count("nu", v[0])? as u32),
            Family::Laplace => Self::laplace(v[0], v[1]),
            Family::LogNormal => Self::log_normal(v[0], v[1]),
            Family::Normal => Self::normal(v[0], v[1]),
            Family::Uniform => Self::uniform(v[0], v[1]),
            Family::Poisson => Self::poisson(v[0]),
            Family::Binomial => Self::binomial(as_count("n", v[0])?, v[1]),
            Family::NegBinomialConditional => Self::nb_conditional(v[0], v[1]),
            Family::Logarithmic => Self::logarithmic(v[0]),
        }
    }

    pub fn params(&self) -> Params {
        self.0
    }

    /// Parameter values in [`Family::param_names`] order.
    pub fn values(&self) -> Vec<f64> {
        match self.0 {
            Params::Gamma { lambda, mu } => vec![lambda, mu],
            Params::Exponential { lambda } => vec![lambda],
            Params::ChiSquared { nu } => vec![nu as f64],
            Params::Laplace { mu, lambda } => vec![mu, lambda],
            Params::LogNormal { m, sigma2 } => vec![m, sigma2],
            Params::Normal { mean, sigma2 } => vec![mean, sigma2],
            Params::Uniform { a, b } => vec![a, b],
            Params::Poisson { lambda } => vec![lambda],
            Params::Binomial { n, p } => vec![n as f64, p],
            Params::NegBinomialConditional { p, r } => vec![p, r],
            Params::Logarithmic { p } => vec![p],
        }
    }

    pub fn family(&self) -> Family {
        match self.0 {
            Params::Gamma { .. } => Family::Gamma,
            Params::Exponential { .. } => Family::Exponential,
            Params::ChiSquared { .. } => Family::ChiSquared,
            Params::Laplace { .. } => Family::Laplace,
            Params::LogNormal { .. } => Family::LogNormal,
            Params::Normal { .. } => Family::Normal,
            Params::Uniform { .. } => Family::Uniform,
            Params::Poisson { .. } => Family::Poisson,
            Params::Binomial { .. } => Family::Binomial,
            Params::NegBinomialConditional { .. } => Family::NegBinomialConditional,
            Params::Logarithmic { .. } => Family::Logarithmic,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.family().is_discrete()
    }

    /// Gamma parameters `(λ, μ)` for the families that are gamma laws:
    /// Exponential is `Gamma(λ, 1)` and ChiSquared(ν) is `Gamma(1/2, ν/2)`.
    pub fn gamma_params(&self) -> Option<(f64, f64)> {
        match self.0 {
            Params::Gamma { lambda, mu } => Some((lambda, mu)),
            Params::Exponential { lambda } => Some((lambda, 1.0)),
            Params::ChiSquared { nu } => Some((0.5, nu as f64 / 2.0)),
            _ => None,
        }
    }

    /// The `Gamma(1/2, ν/2)` law equal to a chi-squared distribution.
    pub fn chi_squared_as_gamma(&self) -> Option<Distribution> {
        match self.0 {
            Params::ChiSquared { nu } => Some(Self(Params::Gamma {
                lambda: 0.5,
                mu: nu as f64 / 2.0,
            })),
            _ => None,
        }
    }

    pub fn support(&self) -> Option<Support> {
        match self.0 {
            Params::Gamma { .. }
            | Params::Exponential { .. }
            | Params::ChiSquared { .. }
            | Params::LogNormal { .. } => Some(Support::PositiveHalfLine),
            Params::Laplace { .. } | Params::Normal { .. } => Some(Support::RealLine),
            Params::Uniform { a, b } => Some(Support::Interval(a, b)),
            _ => None,
        }
    }

    fn require_continuous(&self, operation: &'static str) -> Result<()> {
        if self.is_discrete() {
            Err(Error::FamilyMismatch {
                operation,
                expected: "continuous",
                found: self.family().tag(),
            })
        } else {
            Ok(())
        }
    }

    fn require_discrete(&self, operation: &'static str) -> Result<()> {
        if self.is_discrete() {
            Ok(())
        } else {
            Err(Error::FamilyMismatch {
                operation,
                expected: "discrete",
                found: self.family().tag(),
            })
        }
    }

    /// Density at `x`; zero outside the support.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.ln_pdf(x).map(f64::exp)
    }

    /// Log-density at `x`; `-∞` outside the support.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        self.require_continuous("pdf")?;
        Ok(self.log_density(x))
    }

    /// Unchecked log-density for continuous families.
    pub(crate) fn log_density(&self, x: f64) -> f64 {
        match self.0 {
            Params::Gamma { lambda, mu } => gamma_log_density(lambda, mu, x),
            Params::Exponential { lambda } => gamma_log_density(lambda, 1.0, x),
            Params::ChiSquared { nu } => gamma_log_density(0.5, nu as f64 / 2.0, x),
            Params::Laplace { mu, lambda } => (0.5 * lambda).ln() - lambda * (x - mu).abs(),
            Params::LogNormal { m, sigma2 } => {
                if x <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let lx = x.ln();
                -lx - 0.5 * sigma2.ln() - HALF_LN_2PI - (lx - m).powi(2) / (2.0 * sigma2)
            }
            Params::Normal { mean, sigma2 } => {
                -0.5 * sigma2.ln() - HALF_LN_2PI - (x - mean).powi(2) / (2.0 * sigma2)
            }
            Params::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    -(b - a).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            _ => unreachable!("log_density on a discrete family"),
        }
    }

    /// Probability of `k`; zero outside the support.
    pub fn pmf(&self, k: u64) -> Result<f64> {
        self.ln_pmf(k).map(f64::exp)
    }

    /// Log-probability of `k`; `-∞` outside the support.
    pub fn ln_pmf(&self, k: u64) -> Result<f64> {
        self.require_discrete("pmf")?;
        let kf = k as f64;
        Ok(match self.0 {
            Params::Poisson { lambda } => ln_poisson_pmf(k, lambda),
            Params::Binomial { n, p } => {
                if k > n {
                    f64::NEG_INFINITY
                } else {
                    ln_binomial_pmf(k, n, p)
                }
            }
            Params::NegBinomialConditional { p, r } => {
                if k == 0 {
                    f64::NEG_INFINITY
                } else {
                    ln_gamma(kf + r) - ln_factorial(k) - ln_gamma(r)
                        + kf * (1.0 - p).ln()
                        + r * p.ln()
                        - (-(r * p.ln()).exp_m1()).ln()
                }
            }
            Params::Logarithmic { p } => {
                if k == 0 {
                    f64::NEG_INFINITY
                } else {
                    kf * (1.0 - p).ln() - kf.ln() - (-p.ln()).ln()
                }
            }
            _ => unreachable!(),
        })
    }

    /// Supremum of the density and its location.
    pub fn density_sup(&self) -> Result<DensityBound> {
        self.require_continuous("density_sup")?;
        let at = |sup: f64, x: f64| DensityBound {
            sup,
            attained_at: Some(x),
        };
        Ok(match self.0 {
            Params::Normal { mean, sigma2 } => at(1.0 / (2.0 * PI * sigma2).sqrt(), mean),
            Params::Laplace { mu, lambda } => at(0.5 * lambda, mu),
            Params::LogNormal { m, sigma2 } => at(
                (0.5 * sigma2 - m).exp() / (2.0 * PI * sigma2).sqrt(),
                (m - sigma2).exp(),
            ),
            Params::Uniform { a, b } => DensityBound {
                sup: 1.0 / (b - a),
                attained_at: None,
            },
            _ => {
                let (lambda, mu) = self.gamma_params().expect("gamma-type family");
                if mu < 1.0 {
                    return Err(Error::UnboundedDensity {
                        family: self.family().tag(),
                        reason: "shape below 1, density diverges at 0",
                    });
                }
                if mu == 1.0 {
                    at(lambda, 0.0)
                } else {
                    let mode = (mu - 1.0) / lambda;
                    at(gamma_log_density(lambda, mu, mode).exp(), mode)
                }
            }
        })
    }
}

fn as_count(name: &'static str, value: f64) -> Result<u64> {
    if value.is_finite() && value >= 1.0 && value.fract() == 0.0 && value < 2f64.powi(53) {
        Ok(value as u64)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "integer >= 1",
        })
    }
}

fn gamma_log_density(lambda: f64, mu: f64, x: f64) -> f64 {
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    if x == 0.0 {
        return if mu == 1.0 {
            lambda.ln()
        } else if mu < 1.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    mu * lambda.ln() - ln_gamma(mu) + (mu - 1.0) * x.ln() - lambda * x
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = self.family();
        write!(f, "{}:", family.tag())?;
        for (i, (name, value)) in family.param_names().iter().zip(self.values()).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Parses `family:key=value,...`, e.g. `gamma:lambda=1,mu=2`.
    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected family:key=value,... in {s:?}")))?;
        let family = Family::from_tag(tag.trim())
            .ok_or_else(|| Error::Parse(format!("unknown family {tag:?}")))?;
        let names = family.param_names();
        let mut values: Vec<Option<f64>> = vec![None; names.len()];
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {pair:?}")))?;
            let key = key.trim();
            let slot = names
                .iter()
                .position(|n| *n == key)
                .ok_or_else(|| Error::Parse(format!("{family} has no parameter {key:?}")))?;
            if values[slot].is_some() {
                return Err(Error::Parse(format!("parameter {key:?} given twice")));
            }
            let parsed: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{key}: not a number: {value:?}")))?;
            values[slot] = Some(parsed);
        }
        let values = values
            .into_iter()
            .zip(names)
            .map(|(v, n)| v.ok_or_else(|| Error::Parse(format!("{family} needs {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Distribution::from_values(family, &values)
    }
}
