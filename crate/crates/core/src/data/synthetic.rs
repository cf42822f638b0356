use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};
use crate::model::{Corpus, DocumentNetwork};
use crate::random;

/// Two synthetic documents are linked when the inner product of their topic
/// interests exceeds this value.
pub const LINK_THRESHOLD: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticGroundTruth {
    pub true_k: usize,
    /// `K x W`, rows are word distributions.
    pub topics: Vec<Vec<f64>>,
    /// `D x K`, rows are document topic interests.
    pub doc_interest: Vec<Vec<f64>>,
    pub doc_lengths: Vec<usize>,
    pub link_threshold: f64,
}

/// Draws a linked corpus with `k` topics.
///
/// Topics are `Dir(1, ..., 1)` over `w` words and document interests are
/// `Dir(1, ..., 1)` over the topics. Document `d` has `N_d` tokens, uniform
/// on `[ceil(n/2), n]`; each token picks a topic from the interest and a
/// word from that topic. Documents `i < j` are linked when their interests
/// have inner product above [`LINK_THRESHOLD`].
pub fn generate_synthetic(
    k: usize,
    d: usize,
    w: usize,
    n: usize,
    seed: u64,
) -> Result<(Corpus, DocumentNetwork, SyntheticGroundTruth)> {
    if k == 0 || d == 0 || w == 0 || n == 0 {
        return Err(NrtError::InvalidConfig(format!(
            "synthetic sizes must be positive (K={k}, D={d}, W={w}, N={n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topics: Vec<Vec<f64>> = (0..k)
        .map(|_| random::dirichlet(std::iter::repeat_n(1.0, w), &mut rng))
        .collect();
    let doc_interest: Vec<Vec<f64>> = (0..d)
        .map(|_| random::dirichlet(std::iter::repeat_n(1.0, k), &mut rng))
        .collect();

    let min_len = n.div_ceil(2);
    let mut doc_lengths = Vec::with_capacity(d);
    let mut counts = vec![vec![0u32; w]; d];
    for (doc, interest) in doc_interest.iter().enumerate() {
        let len = rng.random_range(min_len..=n);
        doc_lengths.push(len);
        for _ in 0..len {
            let topic = random::categorical(interest, &mut rng).expect("interest is a distribution");
            let word = random::categorical(&topics[topic], &mut rng).expect("topic is a distribution");
            counts[doc][word] += 1;
        }
    }
    let triplets = counts.iter().enumerate().flat_map(|(doc, row)| {
        row.iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(word, &c)| (doc, word, c))
    });
    let corpus = Corpus::from_triplets(d, w, triplets)?;

    let mut edges = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let inner: f64 = doc_interest[i]
                .iter()
                .zip(&doc_interest[j])
                .map(|(a, b)| a * b)
                .sum();
            if inner > LINK_THRESHOLD {
                edges.push((i, j));
            }
        }
    }
    let network = DocumentNetwork::from_edges(d, edges)?;

    Ok((
        corpus,
        network,
        SyntheticGroundTruth {
            true_k: k,
            topics,
            doc_interest,
            doc_lengths,
            link_threshold: LINK_THRESHOLD,
        },
    ))
}
