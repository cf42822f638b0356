//! Slice sampler: no truncation, atoms are created and retired as the
//! slice variables demand.
//!
//! ```text
//! cargo run --release --example fit_slice -- [iters]
//! ```

use nrt::data::generate_synthetic;
use nrt::{Chain, Hyperparameters, SamplerConfig, SamplerMode};

fn main() -> nrt::Result<()> {
    let iters: usize = std::env::args().nth(1).map_or(500, |a| a.parse().expect("iteration count"));
    let (corpus, network, _) = generate_synthetic(5, 50, 40, 100, 2)?;
    let hyper = Hyperparameters::for_corpus(corpus.num_docs());
    let config = SamplerConfig::new(SamplerMode::Slice, iters, iters / 10, 7);

    let mut chain = Chain::new(&corpus, &network, hyper, config)?;
    while !chain.is_finished() {
        let record = chain.step()?.clone();
        if record.iteration % 50 == 0 {
            let state = chain.state();
            let rounds: Vec<u32> = (0..state.num_topics().min(8))
                .filter_map(|k| state.slice_atom(k).map(|a| a.round))
                .collect();
            println!(
                "iter {:>5}  active {:>3}  instantiated {:>3}  first rounds {:?}",
                record.iteration,
                record.active_topics,
                state.num_topics(),
                rounds
            );
        }
    }
    let trace = chain.trace();
    println!("mean active topics after burn-in: {:.2}", trace.mean_active_topics(iters / 10).unwrap_or(f64::NAN));
    Ok(())
}
