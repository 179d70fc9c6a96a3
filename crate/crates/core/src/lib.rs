//! Exact symbolic arithmetic for q-deformed Hermite polynomials, double
//! q-analytic functions and the q-deformed wave equation.
//!
//! Coefficients live in the field of rational functions in `s = √q` over the
//! Gaussian rationals; see [`coeff::CoefExpr`].

pub mod coeff;
pub mod error;
pub mod gaussian;
pub mod hermite;
pub mod identities;
pub mod json;
pub mod laurent;
pub mod mpoly;
pub mod ops;
pub mod qnum;
pub mod qwave;
pub mod series;

pub use coeff::CoefExpr;
pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use identities::{Status, Verdict};
pub use laurent::LaurentPoly;
pub use mpoly::MPoly;
pub use qnum::QBase;
pub use qwave::{Speed, WaveSolution};
pub use series::TruncSeries;
