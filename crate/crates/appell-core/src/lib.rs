//! Appell polynomial families p_n from a generating function g(t), certified
//! multiprecision root finding for the scaled polynomials p_n(nx), the
//! Szegő-curve geometry that predicts where their zeros accumulate, and
//! quantitative validation of the predictions.
//!
//! Module map:
//! - [`genfun`]: g(t) itself — Taylor coefficients, zeros below a cutoff,
//!   Laurent data of 1/(t·g(t)) at each zero.
//! - [`appell`]: polynomial construction and every asymptotic evaluator.
//! - [`rootfind`]: Aberth–Ehrlich solver and the argument-principle counter.
//! - [`attractor`]: dominance classification, bisector lines, Φ regions, and
//!   the attractor polyline ⋃∂D_a.
//! - [`validate`]: Hausdorff distances, density histograms, error tables.

pub mod appell;
pub mod attractor;
pub mod bigc;
mod error;
pub mod genfun;
pub mod rootfind;
pub mod validate;

pub use error::{Error, Result};
