//! Adaptive OFDM index modulation over two-hop decode-and-forward relays.
//!
//! The crate has two halves that are meant to be checked against each other:
//! a link-level Monte Carlo simulator ([`montecarlo`], built on [`channel`],
//! [`mapping`] and [`modem`]) and closed-form evaluation of the outage,
//! capacity and symbol-error expressions ([`analytics`]).

pub mod analytics;
pub mod block;
pub mod channel;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod mapping;
pub mod modem;
pub mod montecarlo;
pub mod pattern;
pub mod specialfn;

pub use block::{ConcatenatedBlock, SymbolSpace};
pub use config::{Hop, Methodology, SystemConfig};
pub use error::{Error, Result};
pub use mapping::{MappingScheme, SelectionResult};
pub use pattern::ActivationPattern;
