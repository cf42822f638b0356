#![allow(dead_code)]

use nrt::model::{Corpus, ModelState, TopicParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random but valid parameters for `k` topics, every `r` on.
pub fn random_params(num_docs: usize, vocab: usize, k: usize, seed: u64) -> Vec<TopicParams> {
    let mut rng = rng(seed);
    (0..k)
        .map(|_| {
            let raw: Vec<f64> = (0..vocab).map(|_| rng.random::<f64>() + 0.05).collect();
            let total: f64 = raw.iter().sum();
            TopicParams {
                theta: raw.iter().map(|v| v / total).collect(),
                pi: rng.random_range(0.5..3.0),
                q: (0..num_docs).map(|_| rng.random_range(0.1..0.9)).collect(),
                r: vec![true; num_docs],
                beta: (0..num_docs).map(|_| rng.random_range(0.5..2.0)).collect(),
                atom: None,
            }
        })
        .collect()
}

pub fn random_state(corpus: &Corpus, k: usize, seed: u64) -> ModelState {
    ModelState::from_parameters(corpus, random_params(corpus.num_docs(), corpus.vocab_size(), k, seed)).unwrap()
}

/// Sample mean, sample variance and their standard errors, the latter from
/// the sample fourth central moment.
pub struct Moments {
    pub mean: f64,
    pub var: f64,
    pub mean_se: f64,
    pub var_se: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    Moments {
        mean,
        var,
        mean_se: (var / n).sqrt(),
        var_se: ((m4 - var * var) / n).sqrt(),
    }
}

/// Asserts mean and variance lie within three standard errors of the
/// closed forms.
pub fn assert_moments(label: &str, xs: &[f64], mean: f64, var: f64) {
    let m = moments(xs);
    assert!(
        (m.mean - mean).abs() <= 3.0 * m.mean_se,
        "{label}: mean {} vs {mean} (se {})",
        m.mean,
        m.mean_se
    );
    assert!(
        (m.var - var).abs() <= 3.0 * m.var_se,
        "{label}: variance {} vs {var} (se {})",
        m.var,
        m.var_se
    );
}

/// One-sample Kolmogorov-Smirnov p-value (asymptotic distribution).
pub fn ks_p_value(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        p += 2.0 * (-1f64).powf(j - 1.0) * (-2.0 * j * j * lambda * lambda).exp();
    }
    p.clamp(0.0, 1.0)
}

/// Pearson chi-square p-value of observed counts against expected counts.
pub fn chi_square_p_value(observed: &[f64], expected: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = (observed.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

/// Trapezoid mean of an unnormalised density on `(0, 1)`.
pub fn quadrature_mean(density: impl Fn(f64) -> f64) -> f64 {
    let steps = 200_000;
    let h = 1.0 / steps as f64;
    let (mut mass, mut first) = (0.0, 0.0);
    for i in 1..steps {
        let x = i as f64 * h;
        let f = density(x);
        mass += f;
        first += x * f;
    }
    first / mass
}
