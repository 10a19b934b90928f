//! Numerical operators of Gegenbauer harmonic analysis on the half-line:
//! the generalized shift, its maximal functions, the spectral transform
//! pair with calibrated inversion, weighted function-space norms, and the
//! fractional-integral (Riesz-type) potentials — together with the
//! quadrature and special-function machinery they stand on.
//!
//! Everything is plain `f64` numerics over [0, ∞) with the hyperbolic
//! weight sh^{2λ} t dt, 0 < λ < 1/2.

pub mod error;
pub mod functions;
pub mod maximal;
pub mod measure;
pub mod params;
pub mod quadrature;
pub mod riesz;
pub mod shift;
pub mod spaces;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
pub use functions::{GridFunction, Interpolation, TestFunction};
pub use params::{Degree, GegenbauerParams};

#[cfg(test)]
pub(crate) mod test_fixtures;
