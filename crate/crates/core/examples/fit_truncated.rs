//! Truncated Gibbs sampler on a synthetic corpus with three topics.
//!
//! ```text
//! cargo run --release --example fit_truncated -- [iters]
//! ```

use nrt::data::generate_synthetic;
use nrt::eval::topic_count_histogram;
use nrt::model::active_topics;
use nrt::{run_truncated, Hyperparameters, SamplerConfig, SamplerMode};

fn main() -> nrt::Result<()> {
    let iters: usize = std::env::args().nth(1).map_or(300, |a| a.parse().expect("iteration count"));
    let burnin = iters / 10;
    let (corpus, network, _) = generate_synthetic(3, 50, 40, 100, 1)?;

    // ten topics per document, as a deliberately loose upper bound
    let hyper = Hyperparameters::for_corpus(corpus.num_docs());
    let config = SamplerConfig::new(SamplerMode::Truncated, iters, burnin, 42);
    let (state, trace) = run_truncated(&corpus, &network, &hyper, &config)?;

    for r in trace.records.iter().step_by((iters / 10).max(1)) {
        println!("iter {:>5}  loglik {:>10.1}  active {}", r.iteration, r.log_likelihood, r.active_topics);
    }
    println!("histogram after burn-in: {:?}", topic_count_histogram(&trace, burnin));

    let mut topics = active_topics(&state);
    topics.sort_by_key(|&k| std::cmp::Reverse(state.topic_total(k)));
    for k in topics.into_iter().take(5) {
        println!("topic {k}: pi {:.3}, {} tokens", state.pi(k), state.topic_total(k));
    }
    Ok(())
}
