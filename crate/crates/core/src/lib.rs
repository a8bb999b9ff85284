//! Trojan-horse attack analysis for quantum key distribution hardware.
//!
//! - [`stats`]: photon-number distributions, attenuation and multi-photon
//!   probabilities.
//! - [`info`]: information Eve gains from a back-reflected probe.
//! - [`reflectometry`]: reflection paths of an optical circuit and the OTDR
//!   and OFDR traces they produce.
//! - [`audit`]: countermeasure evaluation and privacy-amplification budget.
//! - [`cli`]: the `qta` command-line front end.

pub mod audit;
pub mod cli;
pub mod demo;
pub mod error;
pub mod info;
pub mod output;
pub mod reflectometry;
pub mod stats;
pub mod units;

pub use error::{Error, Result};
