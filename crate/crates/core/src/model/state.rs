use serde::{Deserialize, Serialize};

use super::corpus::{Cell, Corpus};
use crate::error::{NrtError, Result};

/// Auxiliary variables of one atom in the slice representation of the
/// gamma process: the weight is `jump * exp(-arrival)`, and `round` is the
/// Poisson round the atom was born in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceAtom {
    pub jump: f64,
    pub arrival: f64,
    pub round: u32,
}

impl SliceAtom {
    pub fn weight(&self) -> f64 {
        (self.jump * (-self.arrival).exp()).max(f64::MIN_POSITIVE)
    }
}

/// Parameters of one topic, used to build a state by hand.
#[derive(Clone, Debug, PartialEq)]
pub struct TopicParams {
    pub theta: Vec<f64>,
    pub pi: f64,
    pub q: Vec<f64>,
    pub r: Vec<bool>,
    pub beta: Vec<f64>,
    pub atom: Option<SliceAtom>,
}

#[derive(Clone, Debug)]
pub(crate) struct Topic {
    pub(crate) theta: Vec<f64>,
    pub(crate) pi: f64,
    pub(crate) q: Vec<f64>,
    pub(crate) r: Vec<bool>,
    pub(crate) beta: Vec<f64>,
    pub(crate) atom: Option<SliceAtom>,
    // sufficient statistics of the allocation
    pub(crate) doc_counts: Vec<u32>,
    pub(crate) word_counts: Vec<u32>,
    pub(crate) total: u64,
    // consecutive sweeps without tokens or slice support
    pub(crate) idle_sweeps: u32,
}

impl Topic {
    fn from_params(p: TopicParams, vocab_size: usize) -> Self {
        let num_docs = p.q.len();
        Topic {
            theta: p.theta,
            pi: p.pi,
            q: p.q,
            r: p.r,
            beta: p.beta,
            atom: p.atom,
            doc_counts: vec![0; num_docs],
            word_counts: vec![0; vocab_size],
            total: 0,
            idle_sweeps: 0,
        }
    }

    /// `r_{d,k} * pi_k * beta_{d,k}`, the per-document topic intensity.
    #[inline]
    pub(crate) fn intensity(&self, d: usize) -> f64 {
        if self.r[d] {
            self.pi * self.beta[d]
        } else {
            0.0
        }
    }

    /// `sum_d r_{d,k} beta_{d,k}`: the exposure multiplying `pi_k` in the
    /// Poisson likelihood.
    pub(crate) fn exposure(&self) -> f64 {
        self.beta
            .iter()
            .zip(&self.r)
            .filter(|(_, &r)| r)
            .map(|(b, _)| b)
            .sum()
    }
}

/// All latent variables of one chain.
///
/// Allocations are stored per token: each unit of an observed count
/// `w_{d,n}` carries a topic label, and `w_{d,n,k}` is the number of
/// tokens of cell `(d, n)` labelled `k`. Per-topic document and word totals
/// are kept in sync with the labels.
#[derive(Clone, Debug)]
pub struct ModelState {
    num_docs: usize,
    vocab_size: usize,
    pub(crate) topics: Vec<Topic>,
    pub(crate) token_offsets: Vec<usize>,
    pub(crate) assignments: Vec<u32>,
    pub(crate) active_r: Vec<u32>,
    pub(crate) slice_u: Option<Vec<f64>>,
}

impl ModelState {
    /// State with no topics and every token unassigned; the samplers fill
    /// it during initialisation.
    pub(crate) fn skeleton(corpus: &Corpus) -> Self {
        let mut token_offsets = Vec::with_capacity(corpus.num_cells() + 1);
        token_offsets.push(0);
        let mut acc = 0usize;
        for c in corpus.cells() {
            acc += c.count as usize;
            token_offsets.push(acc);
        }
        ModelState {
            num_docs: corpus.num_docs(),
            vocab_size: corpus.vocab_size(),
            topics: Vec::new(),
            token_offsets,
            assignments: vec![u32::MAX; acc],
            active_r: vec![0; corpus.num_docs()],
            slice_u: None,
        }
    }

    /// Builds a state from explicit topic parameters. Every token of a cell
    /// goes to the topic with the largest rate contribution; use
    /// [`ModelState::set_allocation`] to override.
    pub fn from_parameters(corpus: &Corpus, params: Vec<TopicParams>) -> Result<Self> {
        let mut state = Self::skeleton(corpus);
        for p in params {
            state.push_topic(p)?;
        }
        for (ci, cell) in corpus.cells().iter().enumerate() {
            let best = (0..state.topics.len())
                .map(|k| (k, state.topics[k].theta[cell.word] * state.topics[k].intensity(cell.doc)))
                .filter(|&(_, w)| w > 0.0)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(k, _)| k)
                .ok_or(NrtError::ZeroRate {
                    doc: cell.doc,
                    word: cell.word,
                })?;
            for t in state.token_offsets[ci]..state.token_offsets[ci + 1] {
                state.assign_token(cell, t, best);
            }
        }
        Ok(state)
    }

    pub(crate) fn push_topic(&mut self, p: TopicParams) -> Result<()> {
        if p.theta.len() != self.vocab_size {
            return Err(NrtError::IndexOutOfRange {
                what: "theta length",
                index: p.theta.len(),
                bound: self.vocab_size,
            });
        }
        for (what, len) in [("q length", p.q.len()), ("r length", p.r.len()), ("beta length", p.beta.len())] {
            if len != self.num_docs {
                return Err(NrtError::IndexOutOfRange {
                    what,
                    index: len,
                    bound: self.num_docs,
                });
            }
        }
        for (d, &on) in p.r.iter().enumerate() {
            self.active_r[d] += on as u32;
        }
        self.topics.push(Topic::from_params(p, self.vocab_size));
        Ok(())
    }

    /// Drops the last topic. It must hold no tokens.
    pub(crate) fn pop_topic(&mut self) {
        let topic = self.topics.pop().expect("pop on empty topic list");
        debug_assert_eq!(topic.total, 0);
        for (d, &on) in topic.r.iter().enumerate() {
            self.active_r[d] -= on as u32;
        }
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Number of instantiated topics (truncation level or slice atoms).
    pub fn num_topics(&self) -> usize {
        self.topics.len()
    }

    pub fn theta(&self, k: usize) -> &[f64] {
        &self.topics[k].theta
    }

    pub fn pi(&self, k: usize) -> f64 {
        self.topics[k].pi
    }

    pub fn q(&self, d: usize, k: usize) -> f64 {
        self.topics[k].q[d]
    }

    pub fn r(&self, d: usize, k: usize) -> bool {
        self.topics[k].r[d]
    }

    pub fn beta(&self, d: usize, k: usize) -> f64 {
        self.topics[k].beta[d]
    }

    pub fn slice_atom(&self, k: usize) -> Option<SliceAtom> {
        self.topics[k].atom
    }

    /// `sum_n w_{d,n,k}`.
    pub fn doc_topic_count(&self, d: usize, k: usize) -> u32 {
        self.topics[k].doc_counts[d]
    }

    /// `sum_d w_{d,n,k}`.
    pub fn topic_word_count(&self, k: usize, n: usize) -> u32 {
        self.topics[k].word_counts[n]
    }

    /// `sum_{d,n} w_{d,n,k}`.
    pub fn topic_total(&self, k: usize) -> u64 {
        self.topics[k].total
    }

    /// `sum_d r_{d,k} beta_{d,k}`.
    pub fn topic_exposure(&self, k: usize) -> f64 {
        self.topics[k].exposure()
    }

    /// Number of topics with `r_{d,k} = 1`.
    pub fn retained_topics(&self, d: usize) -> u32 {
        self.active_r[d]
    }

    /// Per-token slice variables, present in slice mode after the first sweep.
    pub fn slice_variables(&self) -> Option<&[f64]> {
        self.slice_u.as_deref()
    }

    pub fn set_pi(&mut self, k: usize, pi: f64) {
        self.topics[k].pi = pi;
    }

    pub fn set_theta(&mut self, k: usize, theta: Vec<f64>) {
        assert_eq!(theta.len(), self.vocab_size);
        self.topics[k].theta = theta;
    }

    pub fn set_q(&mut self, d: usize, k: usize, q: f64) {
        self.topics[k].q[d] = q;
    }

    pub fn set_beta(&mut self, d: usize, k: usize, beta: f64) {
        self.topics[k].beta[d] = beta;
    }

    pub fn set_r(&mut self, d: usize, k: usize, on: bool) {
        let slot = &mut self.topics[k].r[d];
        if *slot != on {
            *slot = on;
            if on {
                self.active_r[d] += 1;
            } else {
                self.active_r[d] -= 1;
            }
        }
    }

    /// Replaces the slice variables of topic `k` and sets `pi_k` to match.
    pub fn set_atom(&mut self, k: usize, atom: SliceAtom) {
        let topic = &mut self.topics[k];
        topic.atom = Some(atom);
        topic.pi = atom.weight();
    }

    /// `w_{d,n,.}` as a dense vector over instantiated topics. Unobserved
    /// cells give all zeros.
    pub fn allocation(&self, corpus: &Corpus, d: usize, n: usize) -> Result<Vec<u32>> {
        self.check_indices(d, n)?;
        let mut out = vec![0u32; self.topics.len()];
        if let Some(ci) = corpus.cell_index(d, n) {
            for &z in &self.assignments[self.token_range(ci)] {
                out[z as usize] += 1;
            }
        }
        Ok(out)
    }

    /// Relabels the tokens of cell `(d, n)` so that topic `k` holds
    /// `counts[k]` of them.
    pub fn set_allocation(&mut self, corpus: &Corpus, d: usize, n: usize, counts: &[u32]) -> Result<()> {
        self.check_indices(d, n)?;
        if counts.len() != self.topics.len() {
            return Err(NrtError::IndexOutOfRange {
                what: "allocation length",
                index: counts.len(),
                bound: self.topics.len(),
            });
        }
        let ci = corpus.cell_index(d, n);
        let observed = ci.map_or(0, |i| corpus.cells()[i].count);
        let total: u32 = counts.iter().sum();
        if total != observed {
            return Err(NrtError::InvariantViolation(format!(
                "allocation of cell ({d}, {n}) sums to {total}, observed {observed}"
            )));
        }
        if let Some(ci) = ci {
            let cell = corpus.cells()[ci];
            let labels = counts
                .iter()
                .enumerate()
                .flat_map(|(k, &c)| std::iter::repeat_n(k, c as usize));
            for (t, k) in self.token_range(ci).zip(labels) {
                self.assign_token(&cell, t, k);
            }
        }
        Ok(())
    }

    pub(crate) fn token_range(&self, cell_index: usize) -> std::ops::Range<usize> {
        self.token_offsets[cell_index]..self.token_offsets[cell_index + 1]
    }

    /// Moves token `t` of `cell` to topic `k`, keeping the totals in sync.
    #[inline]
    pub(crate) fn assign_token(&mut self, cell: &Cell, t: usize, k: usize) {
        let old = self.assignments[t];
        if old as usize == k {
            return;
        }
        if old != u32::MAX {
            let from = &mut self.topics[old as usize];
            from.doc_counts[cell.doc] -= 1;
            from.word_counts[cell.word] -= 1;
            from.total -= 1;
        }
        let to = &mut self.topics[k];
        to.doc_counts[cell.doc] += 1;
        to.word_counts[cell.word] += 1;
        to.total += 1;
        self.assignments[t] = k as u32;
    }

    fn check_indices(&self, d: usize, n: usize) -> Result<()> {
        if d >= self.num_docs {
            return Err(NrtError::IndexOutOfRange {
                what: "doc",
                index: d,
                bound: self.num_docs,
            });
        }
        if n >= self.vocab_size {
            return Err(NrtError::IndexOutOfRange {
                what: "word",
                index: n,
                bound: self.vocab_size,
            });
        }
        Ok(())
    }

    /// Verifies every structural invariant of the state against `corpus`:
    /// parameter ranges, row-stochastic topics, allocation conservation,
    /// thinning consistency, cached totals and the slice construction.
    pub fn check_invariants(&self, corpus: &Corpus) -> Result<()> {
        let fail = |msg: String| Err(NrtError::InvariantViolation(msg));
        if corpus.num_docs() != self.num_docs || corpus.vocab_size() != self.vocab_size {
            return fail("state dimensions differ from corpus".into());
        }
        if self.token_offsets.len() != corpus.num_cells() + 1 {
            return fail("state cell layout differs from corpus".into());
        }
        let k_count = self.topics.len();
        for (k, topic) in self.topics.iter().enumerate() {
            let row_sum: f64 = topic.theta.iter().sum();
            if (row_sum - 1.0).abs() > 1e-10 || topic.theta.iter().any(|&x| !(x >= 0.0)) {
                return fail(format!("theta row {k} sums to {row_sum}"));
            }
            if !(topic.pi > 0.0 && topic.pi.is_finite()) {
                return fail(format!("pi[{k}] = {}", topic.pi));
            }
            for d in 0..self.num_docs {
                let q = topic.q[d];
                if !(q > 0.0 && q < 1.0) {
                    return fail(format!("q[{d},{k}] = {q}"));
                }
                if !(topic.beta[d] > 0.0 && topic.beta[d].is_finite()) {
                    return fail(format!("beta[{d},{k}] = {}", topic.beta[d]));
                }
                if topic.doc_counts[d] > 0 && !topic.r[d] {
                    return fail(format!("doc {d} holds tokens of topic {k} with r = 0"));
                }
            }
        }

        // recompute sufficient statistics from the labels
        let mut doc_counts = vec![vec![0u32; self.num_docs]; k_count];
        let mut word_counts = vec![vec![0u32; self.vocab_size]; k_count];
        for (ci, cell) in corpus.cells().iter().enumerate() {
            let range = self.token_range(ci);
            if range.len() != cell.count as usize {
                return fail(format!(
                    "cell ({}, {}) has {} tokens, observed {}",
                    cell.doc,
                    cell.word,
                    range.len(),
                    cell.count
                ));
            }
            for &z in &self.assignments[range] {
                let z = z as usize;
                if z >= k_count {
                    return fail(format!("token of cell ({}, {}) is unassigned", cell.doc, cell.word));
                }
                doc_counts[z][cell.doc] += 1;
                word_counts[z][cell.word] += 1;
            }
        }
        for (k, topic) in self.topics.iter().enumerate() {
            if topic.doc_counts != doc_counts[k] || topic.word_counts != word_counts[k] {
                return fail(format!("cached counts of topic {k} are stale"));
            }
            if topic.total != word_counts[k].iter().map(|&c| c as u64).sum::<u64>() {
                return fail(format!("cached total of topic {k} is stale"));
            }
        }
        for d in 0..self.num_docs {
            let on = self.topics.iter().filter(|t| t.r[d]).count() as u32;
            if on != self.active_r[d] {
                return fail(format!("retained-topic count of doc {d} is stale"));
            }
        }

        let atoms: Vec<_> = self.topics.iter().filter_map(|t| t.atom).collect();
        if !atoms.is_empty() {
            if atoms.len() != k_count {
                return fail("slice atoms missing for some topics".into());
            }
            for (k, (topic, atom)) in self.topics.iter().zip(&atoms).enumerate() {
                if atom.round == 0 {
                    return fail(format!("round of atom {k} is zero"));
                }
                let w = atom.weight();
                if (topic.pi - w).abs() > 1e-12 * w.max(f64::MIN_POSITIVE) {
                    return fail(format!("pi[{k}] = {} but jump * exp(-arrival) = {w}", topic.pi));
                }
            }
            if atoms.windows(2).any(|p| p[1].round < p[0].round) {
                return fail("atom rounds are not nondecreasing".into());
            }
        }
        Ok(())
    }
}
