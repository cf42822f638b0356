//! A Poisson count whose rate is a sum over topics splits into independent
//! per-topic Poisson counts via a multinomial with probabilities `xi`.
//!
//! ```text
//! cargo run --release --example poisson_multinomial
//! ```

use nrt::model::{poisson_rate, xi, Corpus, ModelState, TopicParams};
use nrt::random::multinomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

fn main() -> nrt::Result<()> {
    let corpus = Corpus::from_triplets(1, 2, [(0, 0, 1)])?;
    let params: Vec<TopicParams> = [0.6, 1.0, 1.5]
        .iter()
        .map(|&pi| TopicParams {
            theta: vec![0.5, 0.5],
            pi,
            q: vec![0.5],
            r: vec![true],
            beta: vec![1.0],
            atom: None,
        })
        .collect();
    let state = ModelState::from_parameters(&corpus, params)?;
    let rate = poisson_rate(&state, 0, 0)?;
    let shares = xi(&state, 0, 0)?;
    println!("total rate {rate:.3}, xi {shares:.3?}");

    let draws = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let total = Poisson::new(rate).expect("positive rate");
    let mut sums = [0.0; 3];
    let mut squares = [0.0; 3];
    let mut cross = 0.0;
    for _ in 0..draws {
        let split = multinomial(total.sample(&mut rng) as u64, &shares, &mut rng);
        for k in 0..3 {
            sums[k] += split[k] as f64;
            squares[k] += (split[k] * split[k]) as f64;
        }
        cross += (split[0] * split[1]) as f64;
    }
    let n = draws as f64;
    for k in 0..3 {
        let mean = sums[k] / n;
        println!(
            "topic {k}: mean {mean:.3}, variance {:.3}, expected both {:.3}",
            squares[k] / n - mean * mean,
            rate * shares[k]
        );
    }
    println!("covariance of topics 0 and 1: {:.4}", cross / n - sums[0] / n * sums[1] / n);
    Ok(())
}
