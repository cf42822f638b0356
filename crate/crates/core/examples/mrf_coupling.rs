//! The random field pulls the retention probabilities of linked documents
//! together. Compare `E[(q_0 - q_1)^2]` for a linked and an unlinked pair.
//!
//! ```text
//! cargo run --release --example mrf_coupling
//! ```

use nrt::model::{Corpus, DocumentNetwork, Hyperparameters};
use nrt::mrf::sample_q;
use nrt::{Chain, SamplerConfig, SamplerMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mean_gap(corpus: &Corpus, network: &DocumentNetwork, sweeps: usize) -> nrt::Result<f64> {
    let hyper = Hyperparameters {
        truncation_k: 3,
        ..Default::default()
    };
    let mut chain = Chain::new(corpus, network, hyper, SamplerConfig::new(SamplerMode::Truncated, sweeps, 0, 5))?;
    let mut total = 0.0;
    while !chain.is_finished() {
        chain.step()?;
        let s = chain.state();
        total += (0..s.num_topics()).map(|k| (s.q(0, k) - s.q(1, k)).powi(2)).sum::<f64>() / s.num_topics() as f64;
    }
    Ok(total / sweeps as f64)
}

fn main() -> nrt::Result<()> {
    // single site: neighbours at 0.9 drag q up from its Beta(1, 2) conditional
    let hyper = Hyperparameters::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for neighbours in [vec![], vec![0.9], vec![0.9; 4], vec![0.9; 16]] {
        let draws: Vec<f64> = (0..20_000).map(|_| sample_q(false, &neighbours, &hyper, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        println!("{:>2} neighbours at 0.9: mean q {mean:.3}", neighbours.len());
    }

    let corpus = Corpus::from_triplets(2, 4, [(0, 0, 3), (0, 1, 1), (1, 2, 2), (1, 3, 4)])?;
    let linked = mean_gap(&corpus, &DocumentNetwork::from_edges(2, [(0, 1)])?, 10_000)?;
    let unlinked = mean_gap(&corpus, &DocumentNetwork::empty(2), 10_000)?;
    println!("E[(q0 - q1)^2]: linked {linked:.4}, unlinked {unlinked:.4}");
    Ok(())
}
