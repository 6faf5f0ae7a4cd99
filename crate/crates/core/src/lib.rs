//! Polynomial lemniscates `{z : |p(z)| < 1}` for monic polynomials whose
//! zeros are constrained to a compact set.
//!
//! * [`poly`]: monic polynomials in zero-product form.
//! * [`rootfind`]: Aberth–Ehrlich root finding and critical points.
//! * [`lemniscate`]: component counting by critical values and by a raster
//!   flood fill, isolation certificates, SVG rendering.
//! * [`potential`]: compact set models, Leja points, capacity, equilibrium
//!   sampling, discrete potentials.
//! * [`constructions`]: the named polynomial families.
//! * [`experiments`]: Monte Carlo and deterministic experiment drivers.

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod lemniscate;
pub mod poly;
pub mod potential;
pub mod rootfind;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{CoefficientVector, ComplexPoint, MonicPolynomial};
