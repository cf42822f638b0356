//! Thin wrappers over `rand_distr` with the clamping the samplers rely on.

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution, Gamma};

/// Gamma draw parameterised by shape and scale.
///
/// Very small shapes (the truncated prior uses `1/K`) underflow to zero in
/// double precision; the result is clamped to the smallest positive normal
/// so that weights stay strictly positive.
pub fn gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    debug_assert!(shape > 0.0 && scale > 0.0, "gamma({shape}, {scale})");
    let x = Gamma::new(shape, scale)
        .expect("gamma parameters are positive")
        .sample(rng);
    x.max(f64::MIN_POSITIVE)
}

/// Beta draw clamped to the open unit interval.
pub fn beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let x = Beta::new(a, b)
        .expect("beta parameters are positive")
        .sample(rng);
    x.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
}

/// Dirichlet draw via normalised gamma variates.
pub fn dirichlet<R: Rng + ?Sized>(alphas: impl IntoIterator<Item = f64>, rng: &mut R) -> Vec<f64> {
    let mut out: Vec<f64> = alphas.into_iter().map(|a| gamma(a, 1.0, rng)).collect();
    let total: f64 = out.iter().sum();
    for x in &mut out {
        *x /= total;
    }
    out
}

/// Index drawn proportionally to nonnegative `weights`.
///
/// Returns `None` when every weight is zero.
pub fn categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = Some(i);
            if target < acc {
                return Some(i);
            }
        }
    }
    // rounding can leave target marginally above the running sum
    last_positive
}

/// Multinomial split of `count` trials over `probs`, which need not be
/// normalised. Small counts draw each trial from the cumulative table;
/// larger ones use sequential conditional binomials.
pub fn multinomial<R: Rng + ?Sized>(count: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    if count == 0 {
        return out;
    }
    if count <= SMALL_COUNT {
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in probs {
            acc += p.max(0.0);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return out;
        }
        let last = probs.iter().rposition(|&p| p > 0.0).expect("positive total");
        for _ in 0..count {
            let target = rng.random::<f64>() * acc;
            // zero-mass entries never start a strictly larger prefix sum
            out[cumulative.partition_point(|&c| c <= target).min(last)] += 1;
        }
        return out;
    }
    let mut remaining = count;
    let mut mass: f64 = probs.iter().sum();
    let last = probs.iter().rposition(|&p| p > 0.0);
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        if Some(i) == last {
            out[i] = remaining;
            break;
        }
        let cond = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, cond)
            .expect("binomial probability in [0, 1]")
            .sample(rng);
        out[i] = draw;
        remaining -= draw;
        mass -= p;
    }
    out
}

const SMALL_COUNT: u64 = 32;
