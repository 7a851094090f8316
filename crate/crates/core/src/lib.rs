//! Photon-counting statistics of filtered N-photon bundles emitted by
//! spontaneous emission from a Fock state.

pub mod error;
pub mod distributions;
pub mod exact;
pub mod kernel;
pub mod moments;
pub mod montecarlo;
pub mod quadrature;
pub mod rates;
pub mod thermal;
pub mod verify;
pub mod wtd;

pub use error::{Error, Result};
pub use rates::{BundleSpec, ExactRates, Filter, RateSet, TimeVector};
