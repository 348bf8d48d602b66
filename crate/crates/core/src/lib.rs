//! Exact truncated q-series arithmetic and a verifier for the 3-adic
//! congruences of the second-order mock theta function `beta(q)`.
//!
//! ```
//! use qseries::eta::{self, SeriesName};
//! use qseries::matrices;
//!
//! # fn main() -> qseries::Result<()> {
//! let x = SeriesName::X.generate(40)?;
//! assert_eq!(x.integer_coeff(1), Some(8.into()));
//! let ux = matrices::fit_poly_in_x(&eta::series_x(120)?.u3(), 3, 40)?;
//! assert_eq!(ux.to_string(), "10*X - 36*X^2 + 27*X^3");
//! # Ok(())
//! # }
//! ```

pub mod bank;
pub mod cache;
pub mod cli;
pub mod congruence;
pub mod dissection;
pub mod error;
pub mod eta;
pub mod matrices;
pub mod padic;
pub mod report;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
pub use report::{CheckReport, Failure};
pub use series::LaurentSeries;
