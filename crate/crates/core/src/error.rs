use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall in two groups. Domain errors ([`Error::is_domain`]) mean the
/// request was well formed but lies outside the region where the quantity
/// exists (an order outside the escort validity domain, an unbounded density,
/// a singular covariance). Everything else is malformed input or a numerical
/// budget that ran out.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}={value}: requires {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("invalid order for {measure}: {violated}")]
    InvalidOrder {
        measure: &'static str,
        violated: String,
    },

    #[error("{measure} is undefined for {family}: {violated}")]
    OutsideValidity {
        measure: &'static str,
        family: &'static str,
        violated: String,
    },

    #[error("density of {family} is unbounded ({reason}); the modified Shannon entropy does not exist")]
    UnboundedDensity {
        family: &'static str,
        reason: &'static str,
    },

    #[error("{operation} requires a {expected} distribution, got {found}")]
    FamilyMismatch {
        operation: &'static str,
        expected: &'static str,
        found: &'static str,
    },

    #[error("Kullback-Leibler divergence needs two members of one family, got {p} and {q}")]
    CrossFamily { p: &'static str, q: &'static str },

    #[error("Kullback-Leibler divergence has no closed form for {0}")]
    UnsupportedKl(&'static str),

    #[error("quadrature did not converge: error estimate {estimate:e} after {subdivisions} subdivisions")]
    NonConvergence { estimate: f64, subdivisions: usize },

    #[error("series not certified after {terms} terms (tail bound {tail_bound:e})")]
    SeriesBudget { terms: usize, tail_bound: f64 },

    #[error("matrix is not positive semidefinite: pivot {pivot:e} at step {step}")]
    NotPsd { pivot: f64, step: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("covariance matrix is singular; the Gaussian entropy is -infinity")]
    SingularCovariance,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that describe a validity-domain violation rather than
    /// malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidOrder { .. }
                | Error::OutsideValidity { .. }
                | Error::UnboundedDensity { .. }
                | Error::SingularCovariance
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
