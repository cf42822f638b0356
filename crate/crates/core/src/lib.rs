//! Nonparametric relational topic models.
//!
//! Documents in a linked corpus each receive a thinned copy of one global
//! gamma process. The per-document retention probabilities are coupled by a
//! pairwise Markov random field over the document network, so linked
//! documents tend to keep the same topics. Word counts are Poisson given the
//! thinned weights, and both the topics and their number are inferred by
//! Gibbs sampling, either under a fixed truncation or exactly with slice
//! variables.
//!
//! The crate is organised as:
//!
//! - [`model`]: corpus, network, hyperparameters, chain state and the Poisson
//!   likelihood shared by both samplers.
//! - [`mrf`]: the subsampling random field and the sampler for `q`.
//! - [`samplers`]: every conditional update and the two chains.
//! - [`data`]: LINQS citation ingestion, synthetic generation, fold splits.
//! - [`eval`]: link/word prediction scores and topic-count summaries.
//! - [`cli`]: the `generate`, `fit` and `eval` commands behind the `nrt` binary.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod mrf;
pub mod random;
pub mod samplers;

pub use error::{NrtError, Result};
pub use model::{ChainTrace, Corpus, DocumentNetwork, Hyperparameters, ModelState};
pub use samplers::{run_slice, run_truncated, Chain, SamplerConfig, SamplerMode};
