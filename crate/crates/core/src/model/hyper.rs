use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};

/// Prior hyperparameters shared by both samplers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Beta prior on the subsampling probabilities `q`, first shape.
    pub a0: f64,
    /// Beta prior on `q`, second shape.
    pub c0: f64,
    /// Gamma shape of the per-document scales `beta` (unit scale).
    pub b0: f64,
    /// Gamma process concentration.
    pub alpha: f64,
    /// Symmetric Dirichlet concentration of the topic base measure.
    pub alpha0: f64,
    /// Total mass of the base measure; Poisson rate of atoms per round in
    /// the slice construction.
    pub gamma_mass: f64,
    /// Number of topics kept by the truncated sampler. The slice sampler
    /// uses it as the number of atoms instantiated at start-up.
    pub truncation_k: usize,
    /// Slice levels are `zeta_base * zeta_ratio^-k` for `k = 1, 2, ...`.
    pub zeta_base: f64,
    pub zeta_ratio: f64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            a0: 1.0,
            c0: 1.0,
            b0: 1.0,
            alpha: 1.0,
            alpha0: 1.0,
            gamma_mass: 1.0,
            truncation_k: 100,
            zeta_base: 1.0,
            zeta_ratio: 1.5,
        }
    }
}

impl Hyperparameters {
    /// Default truncation for a corpus of `num_docs` documents: ten topics
    /// per document, capped at 2000.
    pub fn default_truncation(num_docs: usize) -> usize {
        (10 * num_docs).clamp(1, 2000)
    }

    pub fn for_corpus(num_docs: usize) -> Self {
        Hyperparameters {
            truncation_k: Self::default_truncation(num_docs),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a0", self.a0),
            ("c0", self.c0),
            ("b0", self.b0),
            ("alpha", self.alpha),
            ("alpha0", self.alpha0),
            ("gamma_mass", self.gamma_mass),
            ("zeta_base", self.zeta_base),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(NrtError::InvalidHyperparameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if !(self.zeta_ratio.is_finite() && self.zeta_ratio > 1.0) {
            return Err(NrtError::InvalidHyperparameter(format!(
                "zeta_ratio must exceed 1, got {}",
                self.zeta_ratio
            )));
        }
        if self.truncation_k == 0 {
            return Err(NrtError::InvalidHyperparameter(
                "truncation_k must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Slice level of the `k`-th atom, `k >= 1`.
    pub fn zeta(&self, k: usize) -> f64 {
        self.zeta_base * self.zeta_ratio.powi(-(k as i32))
    }

    /// Largest `k` with `zeta(k) >= u`, or 0 when even the first level is
    /// below `u`.
    pub fn slice_level(&self, u: f64) -> usize {
        if u > self.zeta(1) {
            return 0;
        }
        let estimate = ((self.zeta_base / u).ln() / self.zeta_ratio.ln()).floor();
        let mut k = if estimate.is_finite() { estimate.max(1.0) as usize } else { 1 };
        while self.zeta(k + 1) >= u {
            k += 1;
        }
        while k > 1 && self.zeta(k) < u {
            k -= 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Hyperparameters::default().validate().unwrap();
    }

    #[test]
    fn zeta_ratio_must_exceed_one() {
        let h = Hyperparameters {
            zeta_ratio: 1.0,
            ..Default::default()
        };
        assert!(h.validate().is_err());
        let h = Hyperparameters {
            b0: 0.0,
            ..Default::default()
        };
        assert!(h.validate().is_err());
    }

    #[test]
    fn truncation_default_is_capped() {
        assert_eq!(Hyperparameters::default_truncation(50), 500);
        assert_eq!(Hyperparameters::default_truncation(2708), 2000);
    }

    #[test]
    fn slice_level_matches_scan() {
        let h = Hyperparameters {
            zeta_ratio: 2.0,
            ..Default::default()
        };
        for u in [0.6, 0.5, 0.3, 0.25, 0.2, 1e-3, 1e-9] {
            let scan = (1..200).filter(|&k| h.zeta(k) >= u).max().unwrap_or(0);
            assert_eq!(h.slice_level(u), scan, "u = {u}");
        }
    }
}
