//! Domain types and the Poisson likelihood shared by both samplers.

mod corpus;
mod hyper;
mod likelihood;
mod network;
mod state;
mod trace;

pub use corpus::{Cell, Corpus};
pub use hyper::Hyperparameters;
pub use likelihood::{active_topics, joint_log_likelihood, poisson_rate, xi};
pub use network::DocumentNetwork;
pub use state::{ModelState, SliceAtom, TopicParams};
pub use trace::{ChainTrace, SamplerMode, Snapshot, SweepRecord};
