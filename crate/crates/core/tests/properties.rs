mod common;

use std::collections::BTreeSet;

use nrt::data::kfold_split;
use nrt::eval::{link_prediction_score, word_prediction_score, word_topic_distribution};
use nrt::model::{poisson_rate, xi, Corpus, DocumentNetwork, Hyperparameters};
use nrt::{Chain, SamplerConfig, SamplerMode};
use proptest::collection::vec;
use proptest::prelude::*;

fn triplets(docs: usize, words: usize) -> impl Strategy<Value = Vec<(usize, usize, u32)>> {
    vec((0..docs, 0..words, 0u32..6), 0..40)
}

proptest! {
    #[test]
    fn corpus_cells_are_sorted_unique_and_conserve_counts(t in triplets(6, 8)) {
        let corpus = Corpus::from_triplets(6, 8, t.clone()).unwrap();
        let input: u64 = t.iter().map(|x| x.2 as u64).sum();
        prop_assert_eq!(corpus.total_tokens(), input);
        let cells = corpus.cells();
        prop_assert!(cells.iter().all(|c| c.count > 0));
        prop_assert!(cells.windows(2).all(|w| (w[0].doc, w[0].word) < (w[1].doc, w[1].word)));
        let by_doc: u64 = (0..6).map(|d| corpus.doc_length(d)).sum();
        prop_assert_eq!(by_doc, input);
        for d in 0..6 {
            for n in 0..8 {
                let expected: u32 = t.iter().filter(|x| x.0 == d && x.1 == n).map(|x| x.2).sum();
                prop_assert_eq!(corpus.count(d, n), expected);
            }
        }
    }

    #[test]
    fn networks_are_symmetric_loop_free_and_deduplicated(edges in vec((0usize..7, 0usize..7), 0..30)) {
        let net = DocumentNetwork::from_edges(7, edges.clone()).unwrap();
        let expected: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        prop_assert_eq!(net.edges().iter().copied().collect::<BTreeSet<_>>(), expected.clone());
        prop_assert_eq!(net.num_edges(), expected.len());
        for d in 0..7 {
            prop_assert!(!net.neighbors(d).contains(&d));
            for &l in net.neighbors(d) {
                prop_assert!(net.has_edge(l, d));
            }
        }
        let degree_sum: usize = (0..7).map(|d| net.degree(d)).sum();
        prop_assert_eq!(degree_sum, 2 * net.num_edges());
    }

    #[test]
    fn subnetwork_keeps_exactly_the_induced_edges(
        edges in vec((0usize..8, 0usize..8), 0..30),
        keep in proptest::sample::subsequence((0usize..8).collect::<Vec<_>>(), 0..=8),
    ) {
        let net = DocumentNetwork::from_edges(8, edges).unwrap();
        let sub = net.subnetwork(&keep);
        let induced = net.edges().iter().filter(|(a, b)| keep.contains(a) && keep.contains(b)).count();
        prop_assert_eq!(sub.num_edges(), induced);
        for &(a, b) in sub.edges() {
            prop_assert!(net.has_edge(keep[a], keep[b]));
        }
    }

    #[test]
    fn folds_partition_documents(docs in 2usize..200, folds in 2usize..8, seed in any::<u64>()) {
        prop_assume!(docs >= folds);
        let split = kfold_split(docs, folds, seed).unwrap();
        let sizes = split.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), docs);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let mut seen = vec![0; docs];
        for f in 0..folds {
            for d in split.test_docs(f) {
                seen[d] += 1;
            }
            prop_assert_eq!(split.test_docs(f).len() + split.train_docs(f).len(), docs);
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert_eq!(kfold_split(docs, folds, seed).unwrap(), split);
    }

    #[test]
    fn xi_is_a_probability_vector_proportional_to_rates(k in 1usize..6, seed in any::<u64>(), off in vec(any::<bool>(), 6)) {
        let corpus = Corpus::from_triplets(2, 3, [(0, 0, 1), (1, 2, 2)]).unwrap();
        let mut params = common::random_params(2, 3, k, seed);
        // keep topic 0 on so the rate stays positive
        for (p, &o) in params.iter_mut().zip(&off).skip(1) {
            p.r[0] = !o;
        }
        let rates: Vec<f64> = params.iter().map(|p| if p.r[0] { p.theta[1] * p.pi * p.beta[0] } else { 0.0 }).collect();
        let state = nrt::ModelState::from_parameters(&corpus, params).unwrap();
        let shares = xi(&state, 0, 1).unwrap();
        let total: f64 = rates.iter().sum();
        prop_assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((poisson_rate(&state, 0, 1).unwrap() - total).abs() < 1e-12 * total.max(1.0));
        for (s, r) in shares.iter().zip(&rates) {
            prop_assert!(*s >= 0.0);
            prop_assert!((s - r / total).abs() < 1e-12);
        }
    }

    #[test]
    fn multinomial_conserves_trials_and_respects_zero_mass(
        count in 0u64..200,
        probs in vec(prop_oneof![Just(0.0), 0.01f64..5.0], 1..8),
        seed in any::<u64>(),
    ) {
        prop_assume!(probs.iter().any(|&p| p > 0.0));
        let split = nrt::random::multinomial(count, &probs, &mut common::rng(seed));
        prop_assert_eq!(split.iter().sum::<u64>(), count);
        for (c, p) in split.iter().zip(&probs) {
            if *p == 0.0 {
                prop_assert_eq!(*c, 0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweeps_preserve_conservation_and_thinning(
        t in triplets(5, 6),
        edges in vec((0usize..5, 0usize..5), 0..8),
        slice in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let corpus = Corpus::from_triplets(5, 6, t).unwrap();
        let network = DocumentNetwork::from_edges(5, edges).unwrap();
        let mode = if slice { SamplerMode::Slice } else { SamplerMode::Truncated };
        let hyper = Hyperparameters { truncation_k: 8, ..Default::default() };
        let mut config = SamplerConfig::new(mode, 5, 0, seed);
        config.check_invariants = true;
        let mut chain = Chain::new(&corpus, &network, hyper, config).unwrap();
        while !chain.is_finished() {
            chain.step().unwrap();
            let state = chain.state();
            for cell in corpus.cells() {
                let alloc = state.allocation(&corpus, cell.doc, cell.word).unwrap();
                prop_assert_eq!(alloc.iter().sum::<u32>(), cell.count);
                for (k, &c) in alloc.iter().enumerate() {
                    prop_assert!(c == 0 || state.r(cell.doc, k));
                }
            }
            for k in 0..state.num_topics() {
                prop_assert!((state.theta(k).iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn prediction_scores_are_never_positive(
        t in triplets(6, 4),
        edges in vec((0usize..6, 0usize..6), 1..12),
        k in 1usize..4,
        seed in any::<u64>(),
    ) {
        let corpus = Corpus::from_triplets(6, 4, t).unwrap();
        let network = DocumentNetwork::from_edges(6, edges).unwrap();
        let params = common::random_params(6, 4, k, seed);
        let theta: Vec<Vec<f64>> = params.iter().map(|p| p.theta.clone()).collect();
        let train = [0, 1, 2];
        let test = [3, 4, 5];
        let doc_topics: Vec<Vec<f64>> = train
            .iter()
            .map(|&d| {
                let raw: Vec<f64> = params.iter().map(|p| p.pi * p.beta[d]).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|v| v / s).collect()
            })
            .collect();
        let word_topics = word_topic_distribution(&theta).unwrap();
        let lp = link_prediction_score(&test, &train, &network, &doc_topics, &word_topics, &corpus).unwrap();
        let wp = word_prediction_score(&test, &train, &network, &doc_topics, &theta, &corpus).unwrap();
        prop_assert!(lp.score <= 0.0);
        prop_assert!(wp.score <= 0.0);
        prop_assert_eq!(wp.scored_docs + wp.excluded_docs, test.len());
    }
}
