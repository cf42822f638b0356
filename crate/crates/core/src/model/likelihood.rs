use statrs::function::gamma::ln_gamma;

use super::{Corpus, ModelState};
use crate::error::{NrtError, Result};

/// Poisson rate of word `n` in document `d`:
/// `sum_k theta_{k,n} r_{d,k} pi_k beta_{d,k}`.
pub fn poisson_rate(state: &ModelState, d: usize, n: usize) -> Result<f64> {
    check(state, d, n)?;
    Ok(state
        .topics
        .iter()
        .map(|t| t.theta[n] * t.intensity(d))
        .sum())
}

/// Normalised allocation probabilities of one unit of `w_{d,n}` over the
/// instantiated topics.
pub fn xi(state: &ModelState, d: usize, n: usize) -> Result<Vec<f64>> {
    check(state, d, n)?;
    let mut weights: Vec<f64> = state
        .topics
        .iter()
        .map(|t| t.theta[n] * t.intensity(d))
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(NrtError::ZeroRate { doc: d, word: n });
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Log-probability of the observed counts under the independent Poisson
/// model, including every unobserved (zero) cell.
///
/// Zero cells contribute `-rate`; summed over a document they collapse to
/// `-sum_k r_{d,k} pi_k beta_{d,k} sum_n theta_{k,n}`, so only observed
/// cells are visited individually.
pub fn joint_log_likelihood(state: &ModelState, corpus: &Corpus) -> Result<f64> {
    if corpus.num_docs() != state.num_docs() || corpus.vocab_size() != state.vocab_size() {
        return Err(NrtError::InvariantViolation(
            "state dimensions differ from corpus".into(),
        ));
    }
    let theta_mass: Vec<f64> = state
        .topics
        .iter()
        .map(|t| t.theta.iter().sum())
        .collect();
    let mut total = 0.0;
    for d in 0..corpus.num_docs() {
        let mut expected = 0.0;
        for (t, mass) in state.topics.iter().zip(&theta_mass) {
            expected += t.intensity(d) * mass;
        }
        total -= expected;
        for cell in corpus.doc_cells(d) {
            let rate: f64 = state
                .topics
                .iter()
                .map(|t| t.theta[cell.word] * t.intensity(d))
                .sum();
            if !(rate > 0.0) {
                return Err(NrtError::ZeroRate {
                    doc: cell.doc,
                    word: cell.word,
                });
            }
            let w = cell.count as f64;
            total += w * rate.ln() - ln_gamma(w + 1.0);
        }
    }
    Ok(total)
}

/// Topics holding at least one token, in index order.
pub fn active_topics(state: &ModelState) -> Vec<usize> {
    state
        .topics
        .iter()
        .enumerate()
        .filter(|(_, t)| t.total > 0)
        .map(|(k, _)| k)
        .collect()
}

fn check(state: &ModelState, d: usize, n: usize) -> Result<()> {
    if d >= state.num_docs() {
        return Err(NrtError::IndexOutOfRange {
            what: "doc",
            index: d,
            bound: state.num_docs(),
        });
    }
    if n >= state.vocab_size() {
        return Err(NrtError::IndexOutOfRange {
            what: "word",
            index: n,
            bound: state.vocab_size(),
        });
    }
    Ok(())
}
