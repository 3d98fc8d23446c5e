//! Stochastic simulator and analysis toolkit for a birth/death/mutation
//! population in which non-mutant newborns join an existing fitness level
//! with probability proportional to its size, and deaths strike the least
//! fit individual.
//!
//! * [`model`]: the full population process with deterministic replay.
//! * [`chains`]: the reduced mass-split chain, the coupled epsilon-chains and
//!   the uniform-attachment comparison model.
//! * [`stats`]: observers and estimators (fitness CDF, size histograms,
//!   focal-mutant tracking, exponent fits, law adjudication).
//! * [`theory`]: closed-form laws, critical values and mean-field phases.

pub mod chains;
pub mod error;
pub mod format;
pub mod model;
pub mod params;
pub mod rng;
pub mod stats;
pub mod theory;

pub use error::{ModelError, Result};
pub use params::Params;
