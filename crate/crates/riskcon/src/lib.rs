//! Empirical estimation of risk measures with concentration guarantees.
//!
//! The crate provides:
//! - seeded samplers for sub-Gaussian, sub-exponential and heavy-tailed
//!   distribution families, together with ground-truth risk values
//!   ([`distributions`]);
//! - exact 1-D Wasserstein distance between empirical CDFs ([`wasserstein`]);
//! - estimators for five risk measures: CVaR, spectral risk, utility-based
//!   shortfall risk, CPT-value and rank-dependent expected utility ([`risk`]);
//! - tail-probability and confidence-radius formulas for the estimators
//!   ([`bounds`]);
//! - a risk-sensitive lower-confidence-bound bandit simulator ([`bandit`]);
//! - a config-driven experiment runner emitting CSV ([`experiment`]).

pub mod bandit;
pub mod bounds;
pub mod distributions;
pub mod edf;
pub mod error;
pub mod experiment;
pub mod quadrature;
pub mod risk;
pub mod wasserstein;

pub use edf::Edf;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
