//! Dirichlet-Laplace shrinkage for the sparse normal-means problem.
//!
//! The crate provides the distribution samplers the DL hierarchy needs
//! (including an exact generalized inverse Gaussian sampler), the prior
//! itself in both of its hierarchical forms, blocked Gibbs samplers for DL
//! and two comparison priors (Bayesian lasso, horseshoe), posterior
//! summaries with k-means signal selection, and a replicated simulation
//! harness.

pub mod distributions;
pub mod error;
pub mod gibbs;
pub mod harness;
pub mod inference;
pub mod prior;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
pub use gibbs::{BlHyper, ChainConfig, ChainOutput, Draws};
pub use inference::{PosteriorSummary, SelectionResult};
pub use prior::{AMode, DlPriorSpec};
pub use rng::RngStream;
pub use special::LogValue;
