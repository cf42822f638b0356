//! Topic-number recovery on synthetic corpora: several seeds, both chains.
//!
//! ```text
//! cargo run --release --example recovery_study -- [K] [iters] [seeds]
//! ```

use nrt::data::generate_synthetic;
use nrt::{run_slice, run_truncated, Hyperparameters, SamplerConfig, SamplerMode};
use rayon::prelude::*;

fn main() -> nrt::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let k = args.first().copied().unwrap_or(3);
    let iters = args.get(1).copied().unwrap_or(1000);
    let seeds = args.get(2).copied().unwrap_or(5) as u64;
    let burnin = iters / 10;

    let jobs: Vec<(u64, SamplerMode)> = (0..seeds)
        .flat_map(|s| [(s, SamplerMode::Truncated), (s, SamplerMode::Slice)])
        .collect();
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|&(seed, mode)| -> nrt::Result<String> {
            let (corpus, network, _) = generate_synthetic(k, 50, 40, 100, seed)?;
            let hyper = Hyperparameters::for_corpus(corpus.num_docs());
            let config = SamplerConfig::new(mode, iters, burnin, 1000 + seed);
            let (state, trace) = match mode {
                SamplerMode::Truncated => run_truncated(&corpus, &network, &hyper, &config)?,
                SamplerMode::Slice => run_slice(&corpus, &network, &hyper, &config)?,
            };
            let hist = trace.active_topic_histogram(burnin);
            let mode_k = hist.iter().max_by_key(|(_, &c)| c).map(|(&k, _)| k).unwrap_or(0);
            // topics holding at least 2% of the tokens at the last sweep
            let substantive = (0..state.num_topics())
                .filter(|&k| state.topic_total(k) as f64 >= 0.02 * corpus.total_tokens() as f64)
                .count();
            let late: Vec<f64> = trace.retained(iters / 2).map(|r| r.active_topics as f64).collect();
            let mean = late.iter().sum::<f64>() / late.len() as f64;
            let sd = (late.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / late.len() as f64).sqrt();
            Ok(format!(
                "seed {seed} {mode:>9}: mode K {mode_k}, mean {:.2}, late sd {sd:.2}, final topics over 2% {substantive}, hist {hist:?}",
                trace.mean_active_topics(burnin).unwrap_or(f64::NAN)
            ))
        })
        .collect::<nrt::Result<_>>()?;
    println!("true K = {k}");
    for r in rows {
        println!("{r}");
    }
    Ok(())
}
