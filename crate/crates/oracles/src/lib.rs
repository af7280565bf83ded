//! Slow, independent reference computations for the imrelay test suites.
//!
//! Nothing here shares code with `imrelay`: quadrature replaces closed forms,
//! exhaustive enumeration replaces partial sorts and separable detectors, and
//! sorted samples replace order-statistic formulas.

pub mod bruteforce;
pub mod quad;
pub mod sampling;

pub use quad::{integrate, integrate_to_infinity};
