//! Closed-form outage, capacity, block error rate and rate expressions.
//!
//! All functions take the scenario from a [`SystemConfig`](crate::SystemConfig)
//! with `N_0 = 1`; `P_t` is `snr_tx`.

pub mod capacity;
pub mod outage;
pub mod rates;
pub mod ser;

pub use capacity::{
    capacity_average, capacity_conditional, capacity_conditional_literal, capacity_special_g, capacity_special_l,
    lambda_term, nu_term,
};
pub use outage::{
    outage_asymptotic, outage_average, outage_conditional, outage_conditional_centralized,
    outage_conditional_decentralized, upsilon, upsilon_counts,
};
pub use rates::rate_benchmarks;
pub use ser::{
    order_mgf, ser_average, ser_average_with, ser_theta, ser_theta_with, OrderAssignment, PepScaling, SerApproximation,
    ThetaVariant,
};

/// What an [`AnalyticCurvePoint`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    OutageExact,
    OutageAsymptotic,
    Capacity,
    SerApprox,
    Rate,
}

/// One analytic value at a transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticCurvePoint {
    pub snr_tx: f64,
    pub value: f64,
    pub kind: CurveKind,
}
