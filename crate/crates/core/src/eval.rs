//! Held-out scores and topic-count summaries.
//!
//! Both scores work on a fitted training state. `doc_topics[j]` is the topic
//! vector of `train_docs[j]` and topic vectors share their column order with
//! the rows of `theta` (`K x W`). Documents are addressed by their index in
//! the full corpus and network.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};
use crate::model::{active_topics, ChainTrace, Corpus, DocumentNetwork, ModelState};

/// `ln(1e-300)`, the value a zero-probability word prediction term is
/// floored at.
pub const LOG_FLOOR: f64 = -690.775_527_898_213_7;

/// `W_{n,k} = theta_{k,n} / sum_l theta_{l,n}`; one row per word.
pub fn word_topic_distribution(theta: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let vocab = theta.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(vocab);
    for n in 0..vocab {
        let column: Vec<f64> = theta.iter().map(|row| row[n]).collect();
        let total: f64 = column.iter().sum();
        if !(total > 0.0) {
            return Err(NrtError::ZeroWordColumn(n));
        }
        out.push(column.into_iter().map(|v| v / total).collect());
    }
    Ok(out)
}

/// Normalised `r_{d,k} pi_k beta_{d,k}` over the given topics.
pub fn doc_topic_proportions(state: &ModelState, d: usize, topics: &[usize]) -> Vec<f64> {
    let mut v: Vec<f64> = topics
        .iter()
        .map(|&k| {
            if state.r(d, k) {
                state.pi(k) * state.beta(d, k)
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|x| *x /= total);
    }
    v
}

/// Topic vectors of every document in `state`, plus the `theta` rows they
/// refer to, restricted to the active topics.
pub fn fitted_topics(state: &ModelState) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let topics = active_topics(state);
    let doc_topics = (0..state.num_docs())
        .map(|d| doc_topic_proportions(state, d, &topics))
        .collect();
    let theta = topics.iter().map(|&k| state.theta(k).to_vec()).collect();
    (doc_topics, theta)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkScore {
    pub score: f64,
    pub links: usize,
    /// Terms dropped because a cosine argument was a zero vector.
    pub skipped_terms: usize,
}

/// `Lp = sum_{test i} sum_{train j} delta(i,j) sum_n N_n^i ln cos(T_j, W_n)`.
pub fn link_prediction_score(
    test_docs: &[usize],
    train_docs: &[usize],
    network: &DocumentNetwork,
    doc_topics: &[Vec<f64>],
    word_topics: &[Vec<f64>],
    corpus: &Corpus,
) -> Result<LinkScore> {
    check_aligned(train_docs, doc_topics)?;
    let train_pos = positions(train_docs);
    let word_norms: Vec<f64> = word_topics.iter().map(|w| norm(w)).collect();
    let mut out = LinkScore::default();
    for &i in test_docs {
        for j in network.neighbors(i) {
            let Some(&pos) = train_pos.get(j) else { continue };
            out.links += 1;
            let t = &doc_topics[pos];
            let t_norm = norm(t);
            for cell in corpus.doc_cells(i) {
                let w = &word_topics[cell.word];
                let denom = t_norm * word_norms[cell.word];
                let cos = if denom > 0.0 { dot(t, w) / denom } else { 0.0 };
                if cos > 0.0 {
                    out.score += cell.count as f64 * cos.min(1.0).ln();
                } else {
                    out.skipped_terms += 1;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub score: f64,
    pub scored_docs: usize,
    /// Test documents without a training neighbour.
    pub excluded_docs: usize,
    /// Terms with `T_{i,k} theta_{k,n} = 0`, counted at [`LOG_FLOOR`].
    pub floored_terms: usize,
}

/// `Wp = sum_{test i} sum_n sum_k N_n^i ln(T_{i,k} theta_{k,n})` where `T_i`
/// is the mean topic vector of the training neighbours of `i`.
pub fn word_prediction_score(
    test_docs: &[usize],
    train_docs: &[usize],
    network: &DocumentNetwork,
    doc_topics: &[Vec<f64>],
    theta: &[Vec<f64>],
    corpus: &Corpus,
) -> Result<WordScore> {
    check_aligned(train_docs, doc_topics)?;
    let train_pos = positions(train_docs);
    let k = theta.len();
    let mut out = WordScore::default();
    for &i in test_docs {
        let mut interest = vec![0.0; k];
        let mut neighbours = 0usize;
        for j in network.neighbors(i) {
            if let Some(&pos) = train_pos.get(j) {
                neighbours += 1;
                for (acc, v) in interest.iter_mut().zip(&doc_topics[pos]) {
                    *acc += v;
                }
            }
        }
        if neighbours == 0 {
            out.excluded_docs += 1;
            continue;
        }
        interest.iter_mut().for_each(|v| *v /= neighbours as f64);
        out.scored_docs += 1;
        for cell in corpus.doc_cells(i) {
            let count = cell.count as f64;
            for (t, row) in interest.iter().zip(theta) {
                let p = t * row[cell.word];
                let term = if p > 0.0 { p.ln().max(LOG_FLOOR) } else { LOG_FLOOR };
                if !(p > 0.0) || p.ln() < LOG_FLOOR {
                    out.floored_terms += 1;
                }
                out.score += count * term;
            }
        }
    }
    Ok(out)
}

/// Frequency of each active-topic count after `burnin` sweeps.
pub fn topic_count_histogram(trace: &ChainTrace, burnin: usize) -> BTreeMap<usize, usize> {
    trace.active_topic_histogram(burnin)
}

/// Held-out evaluation of one fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub fold_id: usize,
    pub lp_score: f64,
    pub wp_score: f64,
    pub link: LinkScore,
    pub word: WordScore,
    pub mean_active_topics: f64,
    pub k_histogram: BTreeMap<usize, usize>,
    pub loglik_trace: Vec<(usize, f64)>,
}

impl EvalReport {
    pub fn new(fold_id: usize, link: LinkScore, word: WordScore, trace: &ChainTrace, burnin: usize) -> Self {
        EvalReport {
            fold_id,
            lp_score: link.score,
            wp_score: word.score,
            link,
            word,
            mean_active_topics: trace.mean_active_topics(burnin).unwrap_or(f64::NAN),
            k_histogram: topic_count_histogram(trace, burnin),
            loglik_trace: trace
                .records
                .iter()
                .map(|r| (r.iteration, r.log_likelihood))
                .collect(),
        }
    }
}

fn check_aligned(train_docs: &[usize], doc_topics: &[Vec<f64>]) -> Result<()> {
    if train_docs.len() != doc_topics.len() {
        return Err(NrtError::InvalidConfig(format!(
            "{} training documents but {} topic vectors",
            train_docs.len(),
            doc_topics.len()
        )));
    }
    Ok(())
}

fn positions(docs: &[usize]) -> HashMap<usize, usize> {
    docs.iter().enumerate().map(|(pos, &d)| (d, pos)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
