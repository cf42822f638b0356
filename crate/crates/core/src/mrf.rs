//! Subsampling Markov random field over the retention probabilities `q`.
//!
//! For each topic `k` the field couples `q_{d,k}` and `q_{l,k}` for every
//! network edge `{d, l}` through the pairwise potential
//! `exp(-(q_{d,k} - q_{l,k})^2)`. Topics are not coupled to each other.

use log::warn;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::model::{DocumentNetwork, Hyperparameters, ModelState};
use crate::random;

/// Proposal budget of [`sample_q`] before it gives up and returns the last
/// proposal.
pub const DEFAULT_MAX_PROPOSALS: usize = 10_000;

/// Neighbouring sites of `(d, k)`: the same topic in every linked document.
#[derive(Clone, Copy, Debug)]
pub struct NeighborhoodIndex<'a> {
    network: &'a DocumentNetwork,
}

impl<'a> NeighborhoodIndex<'a> {
    pub fn new(network: &'a DocumentNetwork) -> Self {
        NeighborhoodIndex { network }
    }

    pub fn sites(&self, d: usize, k: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.network.neighbors(d).iter().map(move |&l| (l, k))
    }

    /// Writes the current `q` of every neighbouring site into `buf`.
    pub fn neighbor_values(&self, state: &ModelState, d: usize, k: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend(self.sites(d, k).map(|(l, k)| state.q(l, k)));
    }
}

/// Site energy `sum_l (q - q_l)^2`; the negated log of the MRF factor.
pub fn mrf_energy(q: f64, neighbors: &[f64]) -> f64 {
    neighbors.iter().map(|&l| (q - l) * (q - l)).sum()
}

/// Outcome of one rejection-sampling run for `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QDraw {
    pub value: f64,
    pub proposals: usize,
    /// The proposal budget ran out and `value` is the last unaccepted proposal.
    pub exhausted: bool,
}

/// Neighbourhoods at least this large use the Gaussian proposal in
/// [`sample_q_with_budget`] when the beta factor is bounded.
pub const GAUSSIAN_PROPOSAL_MIN_NEIGHBORS: usize = 4;

/// Draws `q_{d,k}` from
/// `Beta(q; a0 + r, c0 + 1 - r) * exp(-mrf_energy(q, neighbors))`.
///
/// The energy splits as `n (q - m)^2 + sum_l (q_l - m)^2` with `m` the
/// neighbour mean, and only the first term depends on `q`. Two exact
/// rejection schemes follow:
///
/// - propose from the beta factor, accept with `exp(-n (q - m)^2)`;
/// - propose from `N(m, 1/(2n))` restricted to `(0, 1)`, accept with the
///   beta kernel divided by its maximum.
///
/// The second needs both beta shapes at least one and is used for
/// neighbourhoods of [`GAUSSIAN_PROPOSAL_MIN_NEIGHBORS`] or more, where the
/// first accepts rarely.
pub fn sample_q_with_budget<R: Rng + ?Sized>(
    r: bool,
    neighbors: &[f64],
    hyper: &Hyperparameters,
    max_proposals: usize,
    rng: &mut R,
) -> QDraw {
    let (a, b) = if r {
        (hyper.a0 + 1.0, hyper.c0)
    } else {
        (hyper.a0, hyper.c0 + 1.0)
    };
    let max_proposals = max_proposals.max(1);
    if neighbors.is_empty() {
        return QDraw {
            value: random::beta(a, b, rng),
            proposals: 1,
            exhausted: false,
        };
    }
    let n = neighbors.len() as f64;
    let mean = neighbors.iter().sum::<f64>() / n;
    let gaussian = neighbors.len() >= GAUSSIAN_PROPOSAL_MIN_NEIGHBORS && a >= 1.0 && b >= 1.0;

    let mut value = 0.5;
    for proposals in 1..=max_proposals {
        let accept = if gaussian {
            let sd = (0.5 / n).sqrt();
            let x: f64 = mean + sd * rng.sample::<f64, _>(StandardNormal);
            if !(x > 0.0 && x < 1.0) {
                continue;
            }
            value = x;
            log_beta_kernel(x, a, b) - log_beta_kernel_max(a, b)
        } else {
            value = random::beta(a, b, rng);
            -n * (value - mean) * (value - mean)
        };
        if rng.random::<f64>() < accept.exp() {
            return QDraw {
                value,
                proposals,
                exhausted: false,
            };
        }
    }
    QDraw {
        value,
        proposals: max_proposals,
        exhausted: true,
    }
}

fn log_beta_kernel(x: f64, a: f64, b: f64) -> f64 {
    let mut v = 0.0;
    if a != 1.0 {
        v += (a - 1.0) * x.ln();
    }
    if b != 1.0 {
        v += (b - 1.0) * (-x).ln_1p();
    }
    v
}

// for a, b >= 1 the kernel peaks at the beta mode
fn log_beta_kernel_max(a: f64, b: f64) -> f64 {
    if a + b <= 2.0 {
        return 0.0;
    }
    log_beta_kernel((a - 1.0) / (a + b - 2.0), a, b)
}

/// [`sample_q_with_budget`] with [`DEFAULT_MAX_PROPOSALS`]; logs a warning
/// when the budget is exhausted.
pub fn sample_q<R: Rng + ?Sized>(
    r: bool,
    neighbors: &[f64],
    hyper: &Hyperparameters,
    rng: &mut R,
) -> f64 {
    let draw = sample_q_with_budget(r, neighbors, hyper, DEFAULT_MAX_PROPOSALS, rng);
    if draw.exhausted {
        warn!(
            "q sampler hit its proposal budget ({} proposals, {} neighbours)",
            draw.proposals,
            neighbors.len()
        );
    }
    draw.value
}
