//! Closed-form information measures for common probability families,
//! cross-checked against independent numerical oracles.
//!
//! ```
//! use entrokit::{entropy, Distribution};
//!
//! let d = Distribution::exponential(std::f64::consts::E).unwrap();
//! assert!(entropy::shannon(&d).unwrap().abs() < 1e-15);
//! ```

mod error;

pub mod discrete;
pub mod distribution;
pub mod entropy;
pub mod exec;
pub mod gaussian;
pub mod measure;
pub mod oracle;
pub mod special;
pub mod validation;

pub use distribution::{Distribution, Family, Params, Support};
pub use error::{Error, Result};
pub use exec::Exec;
pub use measure::{EntropySpec, Measure, MeasureKind};
pub use oracle::OracleConfig;
