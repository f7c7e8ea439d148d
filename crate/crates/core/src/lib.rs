//! Two-photon interferometric delay sensing under Gaussian phase noise.
//!
//! Closed-form outcome probabilities and Fisher information for
//! Hong-Ou-Mandel ([`hom`]) and two-photon N00N ([`noon`]) interferometers,
//! with and without spectral resolution; independent oracles for the noise
//! average ([`noise_oracle`]) and the Fisher information ([`fisher`]);
//! Monte Carlo maximum-likelihood estimation ([`simulation`]); and a ranking
//! of sensing strategies by achievable information ([`strategy`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_io;
pub mod error;
pub mod fisher;
mod fringe;
pub mod hom;
pub mod noise_oracle;
pub mod noon;
pub mod quadrature;
pub mod simulation;
pub mod strategy;
pub mod types;
pub mod validation;

pub use error::{Error, Result};
pub use types::*;
