//! Gibbs conditionals and the two chains: truncated and slice.
//!
//! One sweep of either chain resamples the allocations of every observed
//! cell, then visits each topic in index order: for every document (in
//! ascending order) `q`, `r` and `beta`, then the topic's word
//! distribution and weight. The slice chain additionally updates the
//! atom's round and retires dormant atoms at the end of the prefix.

mod conditionals;
mod slice;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use conditionals::{
    log_zero_emission, retention_probability, sample_allocations_truncated, sample_beta,
    sample_pi_truncated, sample_r, sample_theta,
};
pub use slice::{
    log_round_prior, log_round_sequence_prior, round_prior, sample_allocations_slice,
    sample_dk, sample_next_round, sample_pi_slice,
};

use crate::error::{NrtError, Result};
use crate::model::{
    active_topics, joint_log_likelihood, ChainTrace, Corpus, DocumentNetwork, Hyperparameters,
    ModelState, Snapshot, SweepRecord, TopicParams,
};
pub use crate::model::SamplerMode;
use crate::mrf::{self, NeighborhoodIndex};
use crate::random;

/// Slice atoms with no tokens and outside every slice for this many
/// consecutive sweeps are dropped from the end of the prefix.
pub const DORMANT_SWEEPS_BEFORE_PRUNING: u32 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub max_iter: usize,
    pub burnin: usize,
    pub seed: u64,
    pub mode: SamplerMode,
    /// Post-burn-in snapshot period.
    pub snapshot_every: usize,
    /// Run [`ModelState::check_invariants`] after every sweep.
    pub check_invariants: bool,
}

impl SamplerConfig {
    pub fn new(mode: SamplerMode, max_iter: usize, burnin: usize, seed: u64) -> Self {
        SamplerConfig {
            max_iter,
            burnin,
            seed,
            mode,
            snapshot_every: 10,
            check_invariants: cfg!(debug_assertions),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter > 0 && self.burnin >= self.max_iter {
            return Err(NrtError::InvalidConfig(format!(
                "burnin ({}) must be below max_iter ({})",
                self.burnin, self.max_iter
            )));
        }
        if self.snapshot_every == 0 {
            return Err(NrtError::InvalidConfig("snapshot_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// A single Markov chain over the model state.
pub struct Chain<'a> {
    corpus: &'a Corpus,
    network: &'a DocumentNetwork,
    hyper: Hyperparameters,
    config: SamplerConfig,
    state: ModelState,
    rng: ChaCha8Rng,
    trace: ChainTrace,
    iteration: usize,
    // scratch
    weights: Vec<f64>,
    neighbor_q: Vec<f64>,
}

impl<'a> Chain<'a> {
    /// Validates the inputs and draws the initial state.
    pub fn new(
        corpus: &'a Corpus,
        network: &'a DocumentNetwork,
        hyper: Hyperparameters,
        config: SamplerConfig,
    ) -> Result<Self> {
        hyper.validate()?;
        config.validate()?;
        if network.num_docs() != corpus.num_docs() {
            return Err(NrtError::InvalidConfig(format!(
                "network has {} documents, corpus {}",
                network.num_docs(),
                corpus.num_docs()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let state = initial_state(corpus, &hyper, config.mode, &mut rng)?;
        Ok(Self::assemble(corpus, network, hyper, config, state, rng))
    }

    /// Continues from an existing state instead of drawing one. Slice mode
    /// needs slice variables on every topic.
    pub fn from_state(
        corpus: &'a Corpus,
        network: &'a DocumentNetwork,
        hyper: Hyperparameters,
        config: SamplerConfig,
        state: ModelState,
    ) -> Result<Self> {
        hyper.validate()?;
        config.validate()?;
        if network.num_docs() != corpus.num_docs() {
            return Err(NrtError::InvalidConfig(format!(
                "network has {} documents, corpus {}",
                network.num_docs(),
                corpus.num_docs()
            )));
        }
        state.check_invariants(corpus)?;
        if config.mode == SamplerMode::Slice && (0..state.num_topics()).any(|k| state.slice_atom(k).is_none()) {
            return Err(NrtError::InvalidConfig("slice mode needs slice variables on every topic".into()));
        }
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(Self::assemble(corpus, network, hyper, config, state, rng))
    }

    fn assemble(
        corpus: &'a Corpus,
        network: &'a DocumentNetwork,
        hyper: Hyperparameters,
        config: SamplerConfig,
        state: ModelState,
        rng: ChaCha8Rng,
    ) -> Self {
        Chain {
            corpus,
            network,
            hyper,
            trace: ChainTrace::new(config.seed, config.mode),
            config,
            state,
            rng,
            iteration: 0,
            weights: Vec::new(),
            neighbor_q: Vec::new(),
        }
    }

    pub fn state(&self) -> &ModelState {
        &self.state
    }

    pub fn trace(&self) -> &ChainTrace {
        &self.trace
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hyper
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.config.max_iter
    }

    /// Runs one full sweep and records it in the trace.
    pub fn step(&mut self) -> Result<&SweepRecord> {
        let started = Instant::now();
        match self.config.mode {
            SamplerMode::Truncated => self.sweep_truncated()?,
            SamplerMode::Slice => self.sweep_slice()?,
        }
        self.iteration += 1;
        if self.config.check_invariants {
            self.state.check_invariants(self.corpus)?;
        }

        let log_likelihood = joint_log_likelihood(&self.state, self.corpus)?;
        let active = active_topics(&self.state);
        if self.iteration > self.config.burnin
            && (self.iteration - self.config.burnin) % self.config.snapshot_every == 0
        {
            self.trace.snapshots.push(Snapshot {
                iteration: self.iteration,
                pi: active.iter().map(|&k| self.state.pi(k)).collect(),
                theta: active.iter().map(|&k| self.state.theta(k).to_vec()).collect(),
                topics: active.clone(),
                log_likelihood,
            });
        }
        self.trace.push(SweepRecord {
            iteration: self.iteration,
            log_likelihood,
            active_topics: active.len(),
            elapsed_secs: started.elapsed().as_secs_f64(),
        })?;
        Ok(self.trace.records.last().expect("just pushed"))
    }

    /// Runs the remaining sweeps.
    pub fn run(mut self) -> Result<(ModelState, ChainTrace)> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(self.into_parts())
    }

    pub fn into_parts(self) -> (ModelState, ChainTrace) {
        (self.state, self.trace)
    }

    fn sweep_truncated(&mut self) -> Result<()> {
        self.resample_allocations_truncated();
        for k in 0..self.state.num_topics() {
            self.update_document_variables(k);
            let theta = sample_theta(&self.state, k, &self.hyper, &mut self.rng);
            self.state.set_theta(k, theta);
            let pi = sample_pi_truncated(&self.state, k, &self.hyper, &mut self.rng);
            self.state.set_pi(k, pi);
        }
        Ok(())
    }

    fn sweep_slice(&mut self) -> Result<()> {
        let mut max_level = 0;
        for ci in 0..self.corpus.num_cells() {
            let level = slice::resample_cell(
                &mut self.state,
                self.corpus,
                &self.hyper,
                ci,
                &mut self.weights,
                &mut self.rng,
            )?;
            max_level = max_level.max(level);
        }
        for k in 0..self.state.num_topics() {
            self.update_document_variables(k);
            let theta = sample_theta(&self.state, k, &self.hyper, &mut self.rng);
            self.state.set_theta(k, theta);
            sample_pi_slice(&mut self.state, k, &self.hyper, &mut self.rng);
            sample_dk(&mut self.state, k, &self.hyper, &mut self.rng);
        }
        self.prune_dormant_atoms(max_level);
        Ok(())
    }

    fn resample_allocations_truncated(&mut self) {
        let num_topics = self.state.num_topics();
        let mut intensity = vec![0.0; num_topics];
        for d in 0..self.corpus.num_docs() {
            for (k, slot) in intensity.iter_mut().enumerate() {
                *slot = self.state.topics[k].intensity(d);
            }
            for ci in self.corpus.doc_cell_range(d) {
                let word = self.corpus.cells()[ci].word;
                self.weights.clear();
                self.weights.extend(
                    self.state
                        .topics
                        .iter()
                        .zip(&intensity)
                        .map(|(t, &s)| t.theta[word] * s),
                );
                conditionals::resplit_cell(
                    &mut self.state,
                    self.corpus,
                    ci,
                    &self.weights,
                    &mut self.rng,
                );
            }
        }
    }

    /// `q`, `r` and `beta` of topic `k` for every document.
    fn update_document_variables(&mut self, k: usize) {
        let neighborhood = NeighborhoodIndex::new(self.network);
        for d in 0..self.state.num_docs() {
            neighborhood.neighbor_values(&self.state, d, k, &mut self.neighbor_q);
            let q = mrf::sample_q(self.state.r(d, k), &self.neighbor_q, &self.hyper, &mut self.rng);
            self.state.set_q(d, k, q);
            let r = sample_r(&self.state, d, k, &mut self.rng);
            self.state.set_r(d, k, r);
            let beta = sample_beta(&self.state, d, k, &self.hyper, &mut self.rng);
            self.state.set_beta(d, k, beta);
        }
    }

    /// Drops trailing atoms that have held no tokens and sat beyond every
    /// slice for [`DORMANT_SWEEPS_BEFORE_PRUNING`] sweeps.
    fn prune_dormant_atoms(&mut self, max_level: usize) {
        for (k, topic) in self.state.topics.iter_mut().enumerate() {
            if topic.total == 0 && k + 1 > max_level {
                topic.idle_sweeps += 1;
            } else {
                topic.idle_sweeps = 0;
            }
        }
        while self.state.num_topics() > 1 {
            let last = self.state.topics.last().expect("nonempty");
            if last.total == 0 && last.idle_sweeps >= DORMANT_SWEEPS_BEFORE_PRUNING {
                self.state.pop_topic();
            } else {
                break;
            }
        }
    }
}

/// Draws the initial state: topics from the base measure, `r = 1`
/// everywhere, `beta` from its prior, `q` from `Beta(a0, c0)`, weights from
/// `Gamma(1/K, 1)` (truncated) or the slice construction, then one
/// multinomial allocation pass.
fn initial_state(
    corpus: &Corpus,
    hyper: &Hyperparameters,
    mode: SamplerMode,
    rng: &mut ChaCha8Rng,
) -> Result<ModelState> {
    let mut state = ModelState::skeleton(corpus);
    let num_docs = corpus.num_docs();
    let k_init = hyper.truncation_k;
    for _ in 0..k_init {
        let params = match mode {
            SamplerMode::Truncated => {
                let theta = random::dirichlet(std::iter::repeat_n(hyper.alpha0, corpus.vocab_size()), rng);
                TopicParams {
                    theta,
                    pi: random::gamma(1.0 / k_init as f64, 1.0, rng),
                    q: (0..num_docs).map(|_| random::beta(hyper.a0, hyper.c0, rng)).collect(),
                    r: vec![true; num_docs],
                    beta: (0..num_docs).map(|_| random::gamma(hyper.b0, 1.0, rng)).collect(),
                    atom: None,
                }
            }
            SamplerMode::Slice => {
                let mut p = slice::prior_atom(&state, hyper, rng);
                p.r = vec![true; num_docs];
                p
            }
        };
        state.push_topic(params)?;
    }

    let mut weights = Vec::with_capacity(k_init);
    for ci in 0..corpus.num_cells() {
        let cell = corpus.cells()[ci];
        weights.clear();
        weights.extend(state.topics.iter().map(|t| t.theta[cell.word] * t.intensity(cell.doc)));
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(NrtError::ZeroRate {
                doc: cell.doc,
                word: cell.word,
            });
        }
        conditionals::resplit_cell(&mut state, corpus, ci, &weights, rng);
    }
    Ok(state)
}

/// Runs the truncated chain to completion.
pub fn run_truncated(
    corpus: &Corpus,
    network: &DocumentNetwork,
    hyper: &Hyperparameters,
    config: &SamplerConfig,
) -> Result<(ModelState, ChainTrace)> {
    if config.mode != SamplerMode::Truncated {
        return Err(NrtError::InvalidConfig("run_truncated needs mode = truncated".into()));
    }
    Chain::new(corpus, network, hyper.clone(), config.clone())?.run()
}

/// Runs the slice chain to completion.
pub fn run_slice(
    corpus: &Corpus,
    network: &DocumentNetwork,
    hyper: &Hyperparameters,
    config: &SamplerConfig,
) -> Result<(ModelState, ChainTrace)> {
    if config.mode != SamplerMode::Slice {
        return Err(NrtError::InvalidConfig("run_slice needs mode = slice".into()));
    }
    Chain::new(corpus, network, hyper.clone(), config.clone())?.run()
}

/// Dispatches on `config.mode`.
pub fn run_chain(
    corpus: &Corpus,
    network: &DocumentNetwork,
    hyper: &Hyperparameters,
    config: &SamplerConfig,
) -> Result<(ModelState, ChainTrace)> {
    Chain::new(corpus, network, hyper.clone(), config.clone())?.run()
}
