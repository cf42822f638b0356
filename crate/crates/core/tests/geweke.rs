//! Joint-distribution check of the whole truncated sweep.
//!
//! Forward draws of (parameters, counts) from the prior are compared with a
//! chain that alternates one Gibbs sweep with a fresh draw of the counts
//! given the parameters. Both have the joint prior as stationary law, so
//! the means of any test function must agree.

mod common;

use common::rng;
use nrt::model::{Corpus, DocumentNetwork, Hyperparameters, ModelState, TopicParams};
use nrt::{Chain, SamplerConfig, SamplerMode};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

const K: usize = 2;
const D: usize = 2;
const W: usize = 3;

fn hyper() -> Hyperparameters {
    Hyperparameters {
        a0: 1.5,
        c0: 1.0,
        b0: 2.0,
        alpha0: 1.2,
        truncation_k: K,
        ..Default::default()
    }
}

/// Parameters from the prior: a Beta pair per topic coupled by the edge
/// potential, `r ~ Bern(q)` conditioned on every document keeping a topic.
fn prior_params(h: &Hyperparameters, rng: &mut ChaCha8Rng) -> Vec<TopicParams> {
    loop {
        let params: Vec<TopicParams> = (0..K)
            .map(|_| {
                let q = loop {
                    let q: Vec<f64> = (0..D).map(|_| nrt::random::beta(h.a0, h.c0, rng)).collect();
                    if rng.random::<f64>() < (-(q[0] - q[1]).powi(2)).exp() {
                        break q;
                    }
                };
                TopicParams {
                    theta: nrt::random::dirichlet(std::iter::repeat_n(h.alpha0, W), rng),
                    pi: nrt::random::gamma(1.0 / K as f64, 1.0, rng),
                    r: q.iter().map(|&p| rng.random::<f64>() < p).collect(),
                    q,
                    beta: (0..D).map(|_| nrt::random::gamma(h.b0, 1.0, rng)).collect(),
                    atom: None,
                }
            })
            .collect();
        if (0..D).all(|d| params.iter().any(|p| p.r[d])) {
            return params;
        }
    }
}

/// Counts `w[d][n][k] ~ Pois(theta_{k,n} r_{d,k} pi_k beta_{d,k})`.
fn draw_counts(params: &[TopicParams], rng: &mut ChaCha8Rng) -> Vec<Vec<Vec<u32>>> {
    (0..D)
        .map(|d| {
            (0..W)
                .map(|n| {
                    params
                        .iter()
                        .map(|p| {
                            let rate = if p.r[d] { p.theta[n] * p.pi * p.beta[d] } else { 0.0 };
                            if rate > 0.0 {
                                Poisson::new(rate).unwrap().sample(rng) as u32
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn build(params: Vec<TopicParams>, counts: &[Vec<Vec<u32>>]) -> (Corpus, ModelState) {
    let triplets = (0..D).flat_map(|d| (0..W).map(move |n| (d, n, counts[d][n].iter().sum::<u32>())));
    let corpus = Corpus::from_triplets(D, W, triplets).unwrap();
    let mut state = ModelState::from_parameters(&corpus, params).unwrap();
    for d in 0..D {
        for n in 0..W {
            state.set_allocation(&corpus, d, n, &counts[d][n]).unwrap();
        }
    }
    (corpus, state)
}

fn extract(state: &ModelState) -> Vec<TopicParams> {
    (0..K)
        .map(|k| TopicParams {
            theta: state.theta(k).to_vec(),
            pi: state.pi(k),
            q: (0..D).map(|d| state.q(d, k)).collect(),
            r: (0..D).map(|d| state.r(d, k)).collect(),
            beta: (0..D).map(|d| state.beta(d, k)).collect(),
            atom: None,
        })
        .collect()
}

/// Label-invariant test functions.
fn stats(params: &[TopicParams], counts: &[Vec<Vec<u32>>]) -> Vec<f64> {
    let sum = |f: &dyn Fn(&TopicParams) -> f64| params.iter().map(f).sum::<f64>();
    let tokens: u32 = counts.iter().flatten().flatten().sum();
    vec![
        sum(&|p| p.pi.min(5.0)),
        sum(&|p| p.q.iter().sum()),
        sum(&|p| p.r.iter().filter(|&&x| x).count() as f64),
        sum(&|p| p.beta.iter().sum()),
        sum(&|p| p.theta[0]),
        sum(&|p| p.theta[0] * p.theta[0]),
        sum(&|p| (p.q[0] - p.q[1]).powi(2)),
        (tokens as f64).min(20.0),
        counts[0][1].iter().sum::<u32>().min(10) as f64,
    ]
}

/// Mean and standard error by batch means.
fn batch_summary(series: &[f64], batches: usize) -> (f64, f64) {
    let size = series.len() / batches;
    let means: Vec<f64> = series.chunks(size).take(batches).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    (mean, (var / batches as f64).sqrt())
}

#[test]
fn truncated_sweep_preserves_the_joint_prior() {
    let h = hyper();
    let network = DocumentNetwork::from_edges(D, [(0, 1)]).unwrap();
    let mut rng = rng(2024);

    let forward_n = 200_000;
    let forward: Vec<Vec<f64>> = (0..forward_n)
        .map(|_| {
            let p = prior_params(&h, &mut rng);
            let c = draw_counts(&p, &mut rng);
            stats(&p, &c)
        })
        .collect();

    let chain_n = 200_000;
    let mut params = prior_params(&h, &mut rng);
    let mut counts = draw_counts(&params, &mut rng);
    let mut successive = Vec::with_capacity(chain_n);
    for i in 0..chain_n {
        let (corpus, state) = build(params, &counts);
        let mut config = SamplerConfig::new(SamplerMode::Truncated, 1, 0, 1_000_000 + i as u64);
        config.check_invariants = true;
        let mut chain = Chain::from_state(&corpus, &network, h.clone(), config, state).unwrap();
        chain.step().unwrap();
        params = extract(chain.state());
        counts = draw_counts(&params, &mut rng);
        successive.push(stats(&params, &counts));
    }

    let names = ["pi", "q", "r", "beta", "theta0", "theta0^2", "dq^2", "tokens", "w01"];
    let mut failures = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let f: Vec<f64> = forward.iter().map(|s| s[j]).collect();
        let c: Vec<f64> = successive.iter().map(|s| s[j]).collect();
        let (fm, fse) = batch_summary(&f, 50);
        let (cm, cse) = batch_summary(&c, 50);
        let z = (fm - cm) / (fse * fse + cse * cse).sqrt();
        println!("{name:>9}: forward {fm:.4} ± {fse:.4}, chain {cm:.4} ± {cse:.4}, z {z:+.2}");
        if z.abs() > 4.0 {
            failures.push(*name);
        }
    }
    assert!(failures.is_empty(), "test functions disagree: {failures:?}");
}
