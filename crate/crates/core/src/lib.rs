//! Large-loss risk for credit portfolios whose obligors are coupled by a Gumbel
//! (LT-Archimedean) copula.
//!
//! The crate is organised bottom-up:
//!
//! * [`stable`]: the one-sided stable mixing law (sampling, density, survival).
//! * [`archimedean`]: generator abstraction with the Gumbel instance.
//! * [`portfolio`]: sub-portfolio data model, conditional default
//!   probabilities and the limiting loss curve `r(v)`.
//! * [`asymptotics`]: sharp approximations of the tail probability and the
//!   expected shortfall.
//! * [`estimators`]: naive, two-step importance sampling and conditional
//!   Monte Carlo estimators.
//! * [`experiment`]: configuration, presets and tabular output used by the
//!   command-line front end.

pub mod archimedean;
pub mod asymptotics;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod portfolio;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod stable;

pub use archimedean::{GumbelGenerator, LtGenerator};
pub use error::{Error, Result};
pub use portfolio::{DefaultScale, Portfolio, SubPortfolio};
pub use stable::PositiveStableLaw;
