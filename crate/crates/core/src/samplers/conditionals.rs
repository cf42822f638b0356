//! Conjugate and discrete conditional updates shared by both chains.

use rand::Rng;

use crate::error::Result;
use crate::model::{Corpus, Hyperparameters, ModelState};
use crate::random;

/// Resamples the split of one observed cell over all instantiated topics:
/// `w_{d,n,.} ~ Mult(w_{d,n}; xi_{d,n,.})`. Returns the new split; an
/// unobserved cell yields all zeros.
pub fn sample_allocations_truncated<R: Rng + ?Sized>(
    state: &mut ModelState,
    corpus: &Corpus,
    d: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    // validates indices
    let xi_probs = match corpus.cell_index(d, n) {
        Some(_) => crate::model::xi(state, d, n)?,
        None => return state.allocation(corpus, d, n),
    };
    let ci = corpus.cell_index(d, n).expect("checked above");
    let counts = resplit_cell(state, corpus, ci, &xi_probs, rng);
    Ok(counts.into_iter().map(|c| c as u32).collect())
}

/// Multinomial resplit of cell `ci` with unnormalised `weights`; relabels
/// the cell's tokens in topic order.
pub(crate) fn resplit_cell<R: Rng + ?Sized>(
    state: &mut ModelState,
    corpus: &Corpus,
    ci: usize,
    weights: &[f64],
    rng: &mut R,
) -> Vec<u64> {
    let cell = corpus.cells()[ci];
    let counts = random::multinomial(cell.count as u64, weights, rng);
    let mut t = state.token_offsets[ci];
    for (k, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            state.assign_token(&cell, t, k);
            t += 1;
        }
    }
    debug_assert_eq!(t, state.token_offsets[ci + 1]);
    counts
}

/// `log prod_n Pois(0; theta_{k,n} pi_k beta_{d,k})`, i.e. the log
/// probability that topic `k`, if retained by document `d`, emits nothing.
pub fn log_zero_emission(state: &ModelState, d: usize, k: usize) -> f64 {
    let mass: f64 = state.theta(k).iter().sum();
    -state.pi(k) * state.beta(d, k) * mass
}

/// Probability of `r = 1` from the three unnormalised masses
/// `q e^L`, `(1 - q) e^L` and `(1 - q)(1 - e^L)`, where `L` is
/// [`log_zero_emission`]. The two `r = 0` masses add up to `1 - q`.
pub fn retention_probability(q: f64, log_zero_emission: f64) -> f64 {
    let keep = q * log_zero_emission.exp();
    let drop_silent = (1.0 - q) * log_zero_emission.exp();
    let drop_other = (1.0 - q) * (-log_zero_emission.exp_m1());
    keep / (keep + drop_silent + drop_other)
}

/// Draws the thinning indicator `r_{d,k}`.
///
/// Forced to 1 when every other topic of the document is thinned out, or
/// when the document holds tokens of topic `k`; otherwise Bernoulli with
/// [`retention_probability`].
pub fn sample_r<R: Rng + ?Sized>(state: &ModelState, d: usize, k: usize, rng: &mut R) -> bool {
    let others_on = state.retained_topics(d) - state.r(d, k) as u32;
    if others_on == 0 || state.doc_topic_count(d, k) > 0 {
        return true;
    }
    let p = retention_probability(state.q(d, k), log_zero_emission(state, d, k));
    rng.random::<f64>() < p
}

/// `beta_{d,k} ~ Gamma(w_{d,.,k} + b0, scale 1 / (r_{d,k} pi_k + 1))`.
pub fn sample_beta<R: Rng + ?Sized>(
    state: &ModelState,
    d: usize,
    k: usize,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> f64 {
    let shape = state.doc_topic_count(d, k) as f64 + hyper.b0;
    let rate = if state.r(d, k) { state.pi(k) } else { 0.0 } + 1.0;
    random::gamma(shape, 1.0 / rate, rng)
}

/// `theta_k ~ Dir(alpha0 + w_{.,1,k}, ..., alpha0 + w_{.,W,k})`.
pub fn sample_theta<R: Rng + ?Sized>(
    state: &ModelState,
    k: usize,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> Vec<f64> {
    let alphas = (0..state.vocab_size()).map(|n| hyper.alpha0 + state.topic_word_count(k, n) as f64);
    random::dirichlet(alphas, rng)
}

/// `pi_k ~ Gamma(1/K + w_{.,.,k}, scale 1 / (sum_d r_{d,k} beta_{d,k} + 1))`
/// with `K` the truncation level.
pub fn sample_pi_truncated<R: Rng + ?Sized>(
    state: &ModelState,
    k: usize,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> f64 {
    let shape = 1.0 / hyper.truncation_k as f64 + state.topic_total(k) as f64;
    let rate = state.topic_exposure(k) + 1.0;
    random::gamma(shape, 1.0 / rate, rng)
}
