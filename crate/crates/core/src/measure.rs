//! Which information measure to evaluate, with validated order parameters.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Orders closer than this to a forbidden value are rejected.
pub const ORDER_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Shannon,
    Renyi,
    GeneralizedRenyi1,
    Tsallis,
    GeneralizedRenyi2,
    SharmaMittal,
    ModifiedShannon,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 7] = [
        MeasureKind::Shannon,
        MeasureKind::Renyi,
        MeasureKind::GeneralizedRenyi1,
        MeasureKind::Tsallis,
        MeasureKind::GeneralizedRenyi2,
        MeasureKind::SharmaMittal,
        MeasureKind::ModifiedShannon,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            MeasureKind::Shannon => "shannon",
            MeasureKind::Renyi => "renyi",
            MeasureKind::GeneralizedRenyi1 => "gr1",
            MeasureKind::Tsallis => "tsallis",
            MeasureKind::GeneralizedRenyi2 => "gr2",
            MeasureKind::SharmaMittal => "sm",
            MeasureKind::ModifiedShannon => "modified",
        }
    }

    pub fn needs_alpha(self) -> bool {
        !matches!(self, MeasureKind::Shannon | MeasureKind::ModifiedShannon)
    }

    pub fn needs_beta(self) -> bool {
        matches!(self, MeasureKind::GeneralizedRenyi2 | MeasureKind::SharmaMittal)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .iter()
            .copied()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown measure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Shannon,
    Renyi { alpha: f64 },
    GeneralizedRenyi1 { alpha: f64 },
    Tsallis { alpha: f64 },
    GeneralizedRenyi2 { alpha: f64, beta: f64 },
    SharmaMittal { alpha: f64, beta: f64 },
    ModifiedShannon,
}

/// A measure together with admissible orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySpec(Measure);

fn order(measure: &'static str, name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidOrder {
            measure,
            violated: format!("{name} = {v} is not > 0"),
        })
    }
}

fn not_one(measure: &'static str, name: &str, v: f64) -> Result<f64> {
    if (v - 1.0).abs() < ORDER_EPS {
        Err(Error::InvalidOrder {
            measure,
            violated: format!("{name} = 1"),
        })
    } else {
        Ok(v)
    }
}

impl EntropySpec {
    pub fn shannon() -> Self {
        Self(Measure::Shannon)
    }

    pub fn modified_shannon() -> Self {
        Self(Measure::ModifiedShannon)
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        let alpha = not_one("renyi", "α", order("renyi", "α", alpha)?)?;
        Ok(Self(Measure::Renyi { alpha }))
    }

    pub fn generalized_renyi1(alpha: f64) -> Result<Self> {
        let alpha = order("gr1", "α", alpha)?;
        Ok(Self(Measure::GeneralizedRenyi1 { alpha }))
    }

    pub fn tsallis(alpha: f64) -> Result<Self> {
        let alpha = not_one("tsallis", "α", order("tsallis", "α", alpha)?)?;
        Ok(Self(Measure::Tsallis { alpha }))
    }

    pub fn generalized_renyi2(alpha: f64, beta: f64) -> Result<Self> {
        let alpha = order("gr2", "α", alpha)?;
        let beta = order("gr2", "β", beta)?;
        if (alpha - beta).abs() < ORDER_EPS {
            return Err(Error::InvalidOrder {
                measure: "gr2",
                violated: "α = β".into(),
            });
        }
        Ok(Self(Measure::GeneralizedRenyi2 { alpha, beta }))
    }

    pub fn sharma_mittal(alpha: f64, beta: f64) -> Result<Self> {
        let alpha = not_one("sm", "α", order("sm", "α", alpha)?)?;
        let beta = not_one("sm", "β", order("sm", "β", beta)?)?;
        Ok(Self(Measure::SharmaMittal { alpha, beta }))
    }

    /// Builds a spec from a kind plus optional orders; missing required
    /// orders are a parse error.
    pub fn from_kind(kind: MeasureKind, alpha: Option<f64>, beta: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("measure {kind} needs --{name}")))
        };
        match kind {
            MeasureKind::Shannon => Ok(Self::shannon()),
            MeasureKind::ModifiedShannon => Ok(Self::modified_shannon()),
            MeasureKind::Renyi => Self::renyi(need(alpha, "alpha")?),
            MeasureKind::GeneralizedRenyi1 => Self::generalized_renyi1(need(alpha, "alpha")?),
            MeasureKind::Tsallis => Self::tsallis(need(alpha, "alpha")?),
            MeasureKind::GeneralizedRenyi2 => {
                Self::generalized_renyi2(need(alpha, "alpha")?, need(beta, "beta")?)
            }
            MeasureKind::SharmaMittal => {
                Self::sharma_mittal(need(alpha, "alpha")?, need(beta, "beta")?)
            }
        }
    }

    pub fn measure(&self) -> Measure {
        self.0
    }

    pub fn kind(&self) -> MeasureKind {
        match self.0 {
            Measure::Shannon => MeasureKind::Shannon,
            Measure::Renyi { .. } => MeasureKind::Renyi,
            Measure::GeneralizedRenyi1 { .. } => MeasureKind::GeneralizedRenyi1,
            Measure::Tsallis { .. } => MeasureKind::Tsallis,
            Measure::GeneralizedRenyi2 { .. } => MeasureKind::GeneralizedRenyi2,
            Measure::SharmaMittal { .. } => MeasureKind::SharmaMittal,
            Measure::ModifiedShannon => MeasureKind::ModifiedShannon,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.0 {
            Measure::Renyi { alpha }
            | Measure::GeneralizedRenyi1 { alpha }
            | Measure::Tsallis { alpha }
            | Measure::GeneralizedRenyi2 { alpha, .. }
            | Measure::SharmaMittal { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self.0 {
            Measure::GeneralizedRenyi2 { beta, .. } | Measure::SharmaMittal { beta, .. } => {
                Some(beta)
            }
            _ => None,
        }
    }
}

impl fmt::Display for EntropySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        if let Some(a) = self.alpha() {
            write!(f, "(α={a}")?;
            if let Some(b) = self.beta() {
                write!(f, ", β={b}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
