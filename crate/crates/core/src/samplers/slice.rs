//! Slice representation of the gamma process.
//!
//! Atoms are generated in Poisson rounds: round `i` holds `C_i ~ Pois(gamma)`
//! atoms, each with weight `E exp(-T)`, `E ~ Exp(mean alpha)` and
//! `T ~ Gamma(i, scale 1/alpha)`. Atoms are ordered by round, so the round
//! index `d_k` is nondecreasing in `k`. Tokens are restricted to a finite
//! prefix of atoms by uniform slice variables against the fixed decreasing
//! levels `zeta_k`.

use rand::Rng;
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{NrtError, Result};
use crate::model::{Corpus, Hyperparameters, ModelState, SliceAtom, TopicParams};
use crate::random;

/// Resamples every token of cell `(d, n)`: a slice variable
/// `u ~ U(0, zeta_{z})` for its current topic, then a new topic with
/// probability proportional to `xi_k 1(u <= zeta_k) / zeta_k`.
///
/// Atoms are instantiated from the prior whenever a slice reaches past the
/// instantiated prefix. Returns the largest slice level seen in the cell.
pub fn sample_allocations_slice<R: Rng + ?Sized>(
    state: &mut ModelState,
    corpus: &Corpus,
    hyper: &Hyperparameters,
    d: usize,
    n: usize,
    rng: &mut R,
) -> Result<usize> {
    state.allocation(corpus, d, n)?; // index check
    match corpus.cell_index(d, n) {
        Some(ci) => resample_cell(state, corpus, hyper, ci, &mut Vec::new(), rng),
        None => Ok(0),
    }
}

pub(crate) fn resample_cell<R: Rng + ?Sized>(
    state: &mut ModelState,
    corpus: &Corpus,
    hyper: &Hyperparameters,
    ci: usize,
    weights: &mut Vec<f64>,
    rng: &mut R,
) -> Result<usize> {
    let cell = corpus.cells()[ci];
    if state.slice_u.is_none() {
        state.slice_u = Some(vec![0.0; state.assignments.len()]);
    }
    let mut max_level = 0;
    for t in state.token_range(ci) {
        let current = state.assignments[t] as usize;
        let u = rng.random::<f64>() * hyper.zeta(current + 1);
        let level = hyper.slice_level(u).max(current + 1);
        max_level = max_level.max(level);
        extend_atoms(state, hyper, level, rng)?;

        weights.clear();
        weights.extend((0..level).map(|k| {
            let topic = &state.topics[k];
            topic.theta[cell.word] * topic.intensity(cell.doc) / hyper.zeta(k + 1)
        }));
        let next = match random::categorical(weights, rng) {
            Some(k) => k,
            // the current topic is always in the slice; only underflow gets here
            None if state.topics[current].r[cell.doc] => current,
            None => {
                return Err(NrtError::EmptySliceSupport {
                    doc: cell.doc,
                    word: cell.word,
                })
            }
        };
        state.assign_token(&cell, t, next);
        state.slice_u.as_mut().expect("initialised above")[t] = u;
    }
    Ok(max_level)
}

/// Instantiates atoms from the prior until at least `count` exist.
pub(crate) fn extend_atoms<R: Rng + ?Sized>(
    state: &mut ModelState,
    hyper: &Hyperparameters,
    count: usize,
    rng: &mut R,
) -> Result<()> {
    while state.num_topics() < count {
        let params = prior_atom(state, hyper, rng);
        state.push_topic(params)?;
    }
    Ok(())
}

/// A fresh atom drawn from the prior, continuing the round sequence of the
/// instantiated atoms.
pub(crate) fn prior_atom<R: Rng + ?Sized>(
    state: &ModelState,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> TopicParams {
    let rounds: Vec<u32> = (0..state.num_topics())
        .filter_map(|k| state.slice_atom(k).map(|a| a.round))
        .collect();
    let round = sample_next_round(&rounds, hyper.gamma_mass, rng);
    let atom = SliceAtom {
        jump: random::gamma(1.0, hyper.alpha, rng),
        arrival: random::gamma(round as f64, 1.0 / hyper.alpha, rng),
        round,
    };
    let num_docs = state.num_docs();
    let theta = random::dirichlet(std::iter::repeat_n(hyper.alpha0, state.vocab_size()), rng);
    let q: Vec<f64> = (0..num_docs).map(|_| random::beta(hyper.a0, hyper.c0, rng)).collect();
    let r = q.iter().map(|&p| rng.random::<f64>() < p).collect();
    let beta = (0..num_docs).map(|_| random::gamma(hyper.b0, 1.0, rng)).collect();
    TopicParams {
        theta,
        pi: atom.weight(),
        q,
        r,
        beta,
        atom: Some(atom),
    }
}

/// Updates `(E_k, T_k)` and hence `pi_k = E_k exp(-T_k)`.
///
/// `E_k | T_k ~ Gamma(w_k + 1, scale 1 / (1/alpha + B_k exp(-T_k)))` with
/// `B_k = sum_d r_{d,k} beta_{d,k}`. `T_k | E_k` has no closed form; one
/// independence Metropolis-Hastings step proposes from the prior
/// `Gamma(d_k, scale 1/alpha)`, so the acceptance ratio is the Poisson
/// likelihood ratio `exp(-w_k T - E_k B_k exp(-T))`.
pub fn sample_pi_slice<R: Rng + ?Sized>(
    state: &mut ModelState,
    k: usize,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> (f64, f64) {
    let atom = state
        .slice_atom(k)
        .expect("slice update on a topic without slice variables");
    let count = state.topic_total(k) as f64;
    let exposure = state.topic_exposure(k);

    let rate = 1.0 / hyper.alpha + exposure * (-atom.arrival).exp();
    let jump = random::gamma(count + 1.0, 1.0 / rate, rng);

    let log_lik = |t: f64| -count * t - jump * exposure * (-t).exp();
    let proposal = random::gamma(atom.round as f64, 1.0 / hyper.alpha, rng);
    let log_ratio = log_lik(proposal) - log_lik(atom.arrival);
    let arrival = if rng.random::<f64>().ln() < log_ratio {
        proposal
    } else {
        atom.arrival
    };

    state.set_atom(
        k,
        SliceAtom {
            jump,
            arrival,
            round: atom.round,
        },
    );
    (jump, arrival)
}

/// `P(C > c)` for `C ~ Pois(gamma)`.
fn poisson_survival(c: u32, gamma: f64) -> f64 {
    gamma_lr(c as f64 + 1.0, gamma)
}

/// Log prior `log p(d_k = i | d_1..d_{k-1})`.
///
/// `previous` is `(d_{k-1}, C_{k-1})`: the predecessor's round and how many
/// atoms so far share it. With no predecessor the first atom sits in the
/// first nonempty round, `p(i) = (1 - f(0)) f(0)^(i-1)`. Otherwise:
/// zero below `d_{k-1}`; `S(C)/S(C-1)` at `d_{k-1}` with `S` the Poisson
/// survival function; `(1 - S(C)/S(C-1)) (1 - f(0)) f(0)^(h-1)` at
/// `d_{k-1} + h`.
pub fn log_round_prior(previous: Option<(u32, u32)>, i: u32, gamma: f64) -> f64 {
    // f(0 | gamma) = exp(-gamma)
    let log_f0 = -gamma;
    let log_nonempty = (-(-gamma).exp_m1()).ln();
    match previous {
        None => {
            if i == 0 {
                f64::NEG_INFINITY
            } else {
                log_nonempty + (i - 1) as f64 * log_f0
            }
        }
        Some((round, count)) => {
            debug_assert!(count >= 1);
            let stay = poisson_survival(count, gamma) / poisson_survival(count - 1, gamma);
            if i < round {
                f64::NEG_INFINITY
            } else if i == round {
                stay.ln()
            } else {
                let h = (i - round) as f64;
                (1.0 - stay).ln() + log_nonempty + (h - 1.0) * log_f0
            }
        }
    }
}

/// `exp` of [`log_round_prior`].
pub fn round_prior(previous: Option<(u32, u32)>, i: u32, gamma: f64) -> f64 {
    log_round_prior(previous, i, gamma).exp()
}

/// Joint log prior of a whole round sequence under the sequential law.
pub fn log_round_sequence_prior(rounds: &[u32], gamma: f64) -> f64 {
    let mut total = 0.0;
    let mut previous: Option<(u32, u32)> = None;
    for &i in rounds {
        total += log_round_prior(previous, i, gamma);
        if total == f64::NEG_INFINITY {
            return total;
        }
        previous = Some(match previous {
            Some((round, count)) if round == i => (round, count + 1),
            _ => (i, 1),
        });
    }
    total
}

/// Sum of the sequential prior terms of `rounds[from..=to]`, conditioned on
/// the atoms before `from`.
fn log_window_prior(rounds: &[u32], from: usize, to: usize, gamma: f64) -> f64 {
    let mut total = 0.0;
    let mut previous = predecessor(&rounds[..from]);
    for &i in &rounds[from..=to] {
        total += log_round_prior(previous, i, gamma);
        if total == f64::NEG_INFINITY {
            return total;
        }
        previous = Some(match previous {
            Some((round, count)) if round == i => (round, count + 1),
            _ => (i, 1),
        });
    }
    total
}

/// Draws the round of the atom following `rounds` from the sequential prior.
pub fn sample_next_round<R: Rng + ?Sized>(rounds: &[u32], gamma: f64, rng: &mut R) -> u32 {
    let previous = predecessor(rounds);
    let (base, stay) = match previous {
        None => (0, 0.0),
        Some((round, count)) => (
            round,
            poisson_survival(count, gamma) / poisson_survival(count - 1, gamma),
        ),
    };
    if rng.random::<f64>() < stay {
        return base;
    }
    // number of rounds advanced: geometric on {1, 2, ...} with success 1 - f(0)
    let f0 = (-gamma).exp();
    let mut h = 1;
    while rng.random::<f64>() < f0 {
        h += 1;
    }
    base + h
}

fn predecessor(rounds: &[u32]) -> Option<(u32, u32)> {
    let &last = rounds.last()?;
    let count = rounds.iter().rev().take_while(|&&r| r == last).count() as u32;
    Some((last, count))
}

/// Log density of `Gamma(shape, scale)` at `x`.
fn gamma_ln_pdf(x: f64, shape: f64, scale: f64) -> f64 {
    (shape - 1.0) * x.ln() - x / scale - ln_gamma(shape) - shape * scale.ln()
}

/// Gibbs update of the round `d_k`:
/// `p(d_k = i | .) ∝ Gamma(T_k; i, 1/alpha) p(d_1..d_K)`.
///
/// The sequence prior is evaluated over all instantiated atoms, so the
/// candidates run from `d_{k-1}` to `d_{k+1}` and the order is preserved.
/// For the last atom the product reduces to `p(d_k = i | d_1..d_{k-1})`.
pub fn sample_dk<R: Rng + ?Sized>(
    state: &mut ModelState,
    k: usize,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> u32 {
    let mut rounds: Vec<u32> = (0..state.num_topics())
        .map(|j| {
            state
                .slice_atom(j)
                .expect("slice update on a topic without slice variables")
                .round
        })
        .collect();
    let atom = state.slice_atom(k).expect("checked above");
    let lower = if k == 0 { 1 } else { rounds[k - 1] };
    let upper = rounds.get(k + 1).copied();
    let scale = 1.0 / hyper.alpha;
    // beyond this the gamma factor decreases in i
    let likelihood_mode = (atom.arrival / scale).ceil().max(1.0) as u32;

    // Only the prior terms of the runs around k depend on d_k: from the
    // start of the predecessor's run to one past the end of the successor's.
    let from = match k {
        0 => 0,
        _ => (0..k).rev().take_while(|&j| rounds[j] == rounds[k - 1]).last().unwrap_or(k - 1),
    };
    let to = match upper {
        Some(u) => (k + 1..rounds.len()).take_while(|&j| rounds[j] == u).last().unwrap_or(k) + 1,
        None => k,
    }
    .min(rounds.len() - 1);

    let mut candidates = Vec::new();
    let mut log_weights = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut i = lower;
    loop {
        rounds[k] = i;
        let lw = gamma_ln_pdf(atom.arrival, i as f64, scale)
            + log_window_prior(&rounds, from, to, hyper.gamma_mass);
        best = best.max(lw);
        candidates.push(i);
        log_weights.push(lw);
        match upper {
            Some(u) if i >= u => break,
            None if i > likelihood_mode && lw < best - 40.0 => break,
            _ => {}
        }
        if i - lower > 100_000 {
            break;
        }
        i += 1;
    }
    let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - best).exp()).collect();
    let chosen = random::categorical(&weights, rng)
        .map(|j| candidates[j])
        .unwrap_or(atom.round);
    state.set_atom(
        k,
        SliceAtom {
            round: chosen,
            ..atom
        },
    );
    chosen
}
