//! Five-fold link and word prediction on a synthetic corpus, using the
//! library pieces the `nrt eval` command is built from.
//!
//! ```text
//! cargo run --release --example cross_validate -- [iters]
//! ```

use nrt::data::{generate_synthetic, kfold_split};
use nrt::eval::{fitted_topics, link_prediction_score, word_prediction_score, word_topic_distribution};
use nrt::{run_slice, Hyperparameters, SamplerConfig, SamplerMode};

fn main() -> nrt::Result<()> {
    let iters: usize = std::env::args().nth(1).map_or(200, |a| a.parse().expect("iteration count"));
    let (corpus, network, _) = generate_synthetic(4, 60, 40, 80, 3)?;
    let split = kfold_split(corpus.num_docs(), 5, 0)?;

    for fold in 0..5 {
        let test = split.test_docs(fold);
        let train = split.train_docs(fold);
        let train_corpus = corpus.subset(&train);
        let train_network = network.subnetwork(&train);

        let hyper = Hyperparameters::for_corpus(train.len());
        let config = SamplerConfig::new(SamplerMode::Slice, iters, iters / 10, fold as u64 + 1);
        let (state, trace) = run_slice(&train_corpus, &train_network, &hyper, &config)?;

        // doc_topics rows follow `train`, matching the scorers' expectations
        let (doc_topics, theta) = fitted_topics(&state);
        let word_topics = word_topic_distribution(&theta)?;
        let lp = link_prediction_score(&test, &train, &network, &doc_topics, &word_topics, &corpus)?;
        let wp = word_prediction_score(&test, &train, &network, &doc_topics, &theta, &corpus)?;
        println!(
            "fold {fold}: K {:.1}, Lp {:>10.2} over {} links, Wp {:>10.2} over {} docs ({} without training neighbours)",
            trace.mean_active_topics(iters / 10).unwrap_or(f64::NAN),
            lp.score,
            lp.links,
            wp.score,
            wp.scored_docs,
            wp.excluded_docs
        );
    }
    Ok(())
}
