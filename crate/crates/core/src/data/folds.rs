use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};

/// Random partition of documents into `num_folds` folds of near-equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    /// Fold index (0-based) of every document.
    pub assignment: Vec<usize>,
    pub num_folds: usize,
}

impl FoldSplit {
    /// Documents held out in fold `f`, ascending.
    pub fn test_docs(&self, f: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&d| self.assignment[d] == f)
            .collect()
    }

    /// Documents used for training when fold `f` is held out, ascending.
    pub fn train_docs(&self, f: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&d| self.assignment[d] != f)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_folds];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles the documents and deals them round-robin, so fold sizes are
/// `floor(D/F)` or `ceil(D/F)`.
pub fn kfold_split(num_docs: usize, num_folds: usize, seed: u64) -> Result<FoldSplit> {
    if num_folds < 2 || num_docs < num_folds {
        return Err(NrtError::InvalidConfig(format!(
            "cannot split {num_docs} documents into {num_folds} folds"
        )));
    }
    let mut order: Vec<usize> = (0..num_docs).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignment = vec![0; num_docs];
    for (position, &d) in order.iter().enumerate() {
        assignment[d] = position % num_folds;
    }
    Ok(FoldSplit {
        assignment,
        num_folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_into_five() {
        let split = kfold_split(10, 5, 1).unwrap();
        assert_eq!(split.sizes(), vec![2; 5]);
    }

    #[test]
    fn cora_sized_split() {
        let mut sizes = kfold_split(2708, 5, 9).unwrap().sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![541, 541, 542, 542, 542]);
    }

    #[test]
    fn seeded_and_covering() {
        let a = kfold_split(37, 4, 3).unwrap();
        assert_eq!(a, kfold_split(37, 4, 3).unwrap());
        let mut all: Vec<usize> = (0..4).flat_map(|f| a.test_docs(f)).collect();
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
        assert_eq!(a.train_docs(0).len() + a.test_docs(0).len(), 37);
    }

    #[test]
    fn degenerate_requests_fail() {
        assert!(kfold_split(3, 1, 0).is_err());
        assert!(kfold_split(3, 4, 0).is_err());
    }
}
