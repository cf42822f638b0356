use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};

/// Which chain produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMode {
    Truncated,
    Slice,
}

impl fmt::Display for SamplerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerMode::Truncated => "truncated",
            SamplerMode::Slice => "slice",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub iteration: usize,
    pub log_likelihood: f64,
    pub active_topics: usize,
    /// Wall time of the sweep. Excluded from determinism comparisons.
    pub elapsed_secs: f64,
}

/// Compact posterior sample restricted to the active topics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub iteration: usize,
    /// Topic indices in the chain state at the time of the snapshot.
    pub topics: Vec<usize>,
    pub pi: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    pub log_likelihood: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub seed: u64,
    pub sampler: SamplerMode,
    pub records: Vec<SweepRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl ChainTrace {
    pub fn new(seed: u64, sampler: SamplerMode) -> Self {
        ChainTrace {
            seed,
            sampler,
            records: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, record: SweepRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.iteration <= last.iteration {
                return Err(NrtError::InvariantViolation(format!(
                    "trace iteration {} does not follow {}",
                    record.iteration, last.iteration
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records with iteration index above `burnin`.
    pub fn retained(&self, burnin: usize) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(move |r| r.iteration > burnin)
    }

    pub fn active_topic_series(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.active_topics).collect()
    }

    /// `(iteration, log-likelihood, active topics)` rows; the part of the
    /// trace covered by the determinism contract.
    pub fn deterministic_view(&self) -> Vec<(usize, f64, usize)> {
        self.records
            .iter()
            .map(|r| (r.iteration, r.log_likelihood, r.active_topics))
            .collect()
    }

    pub fn mean_active_topics(&self, burnin: usize) -> Option<f64> {
        mean(self.retained(burnin).map(|r| r.active_topics as f64))
    }

    pub fn mean_log_likelihood(&self, burnin: usize) -> Option<f64> {
        mean(self.retained(burnin).map(|r| r.log_likelihood))
    }

    pub fn active_topic_histogram(&self, burnin: usize) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for r in self.retained(burnin) {
            *hist.entry(r.active_topics).or_insert(0) += 1;
        }
        hist
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}
