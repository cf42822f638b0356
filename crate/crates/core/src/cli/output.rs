//! File formats written and read by the commands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::SyntheticGroundTruth;
use crate::error::{NrtError, Result};
use crate::model::{ChainTrace, Corpus, DocumentNetwork};

/// Record of one command invocation, written last as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Every flag value, including defaults.
    pub config: serde_json::Value,
    pub dataset_fingerprint: Option<String>,
    pub started_at: String,
    pub finished_at: Option<String>,
    /// Emitted files, relative to the output directory.
    pub outputs: Vec<String>,
    /// `"ok"`, or `"failed"` when the outputs are partial.
    pub status: String,
    pub error: Option<String>,
}

impl RunManifest {
    pub(crate) fn start(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            dataset_fingerprint: None,
            started_at: chrono::Utc::now().to_rfc3339(),
            finished_at: None,
            outputs: Vec::new(),
            status: "running".into(),
            error: None,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| NrtError::io(format!("reading {}", path.display()), e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Stamps the end time and status and writes `manifest.json` into `dir`.
    pub(crate) fn finish(&mut self, dir: &Path, outcome: &Result<()>) -> Result<()> {
        self.finished_at = Some(chrono::Utc::now().to_rfc3339());
        match outcome {
            Ok(()) => self.status = "ok".into(),
            Err(e) => {
                self.status = "failed".into();
                self.error = Some(e.to_string());
            }
        }
        self.outputs.push("manifest.json".into());
        write_json(&dir.join("manifest.json"), self)
    }
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| NrtError::io(format!("creating {}", dir.display()), e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| NrtError::io(format!("writing {}", path.display()), e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| NrtError::io(format!("writing {}", path.display()), e))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_corpus_csv(path: &Path, corpus: &Corpus) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["doc", "word", "count"])?;
    for c in corpus.cells() {
        w.serialize((c.doc, c.word, c.count))?;
    }
    w.flush().map_err(|e| NrtError::io(format!("writing {}", path.display()), e))
}

pub fn write_edges_csv(path: &Path, network: &DocumentNetwork) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["src", "dst"])?;
    for &(a, b) in network.edges() {
        w.serialize((a, b))?;
    }
    w.flush().map_err(|e| NrtError::io(format!("writing {}", path.display()), e))
}

pub fn write_trace_csv(path: &Path, trace: &ChainTrace) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["iter", "loglik", "k_active"])?;
    for r in &trace.records {
        w.serialize((r.iteration, r.log_likelihood, r.active_topics))?;
    }
    w.flush().map_err(|e| NrtError::io(format!("writing {}", path.display()), e))
}

pub fn write_histogram_csv(path: &Path, hist: &BTreeMap<usize, usize>) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["k_active", "count"])?;
    for (k, c) in hist {
        w.serialize((k, c))?;
    }
    w.flush().map_err(|e| NrtError::io(format!("writing {}", path.display()), e))
}

#[derive(Debug, Deserialize)]
struct TripletRow {
    doc: usize,
    word: usize,
    count: u32,
}

#[derive(Debug, Deserialize)]
struct EdgeRow {
    src: usize,
    dst: usize,
}

/// A directory written by `nrt generate`.
pub struct SyntheticDir {
    pub corpus: Corpus,
    pub network: DocumentNetwork,
    pub truth: Option<SyntheticGroundTruth>,
}

/// Reads `corpus.csv`, `edges.csv` and, when present, `ground_truth.json`
/// (which fixes the dimensions; otherwise they are inferred from the
/// largest indices).
pub fn read_synthetic_dir(dir: &Path) -> Result<SyntheticDir> {
    let truth_path = dir.join("ground_truth.json");
    let truth: Option<SyntheticGroundTruth> = if truth_path.exists() {
        let text = fs::read_to_string(&truth_path)
            .map_err(|e| NrtError::io(format!("reading {}", truth_path.display()), e))?;
        Some(serde_json::from_str(&text)?)
    } else {
        None
    };

    let corpus_path = dir.join("corpus.csv");
    let mut triplets = Vec::new();
    for (i, row) in open_csv(&corpus_path)?.deserialize::<TripletRow>().enumerate() {
        let row = row.map_err(|e| parse_error(&corpus_path, i, e))?;
        triplets.push((row.doc, row.word, row.count));
    }
    let edges_path = dir.join("edges.csv");
    let mut edges = Vec::new();
    for (i, row) in open_csv(&edges_path)?.deserialize::<EdgeRow>().enumerate() {
        let row = row.map_err(|e| parse_error(&edges_path, i, e))?;
        edges.push((row.src, row.dst));
    }

    let (num_docs, vocab_size) = match &truth {
        Some(t) => (t.doc_interest.len(), t.topics.first().map_or(0, Vec::len)),
        None => (
            triplets
                .iter()
                .map(|t| t.0)
                .chain(edges.iter().flat_map(|e| [e.0, e.1]))
                .max()
                .map_or(0, |m| m + 1),
            triplets.iter().map(|t| t.1).max().map_or(0, |m| m + 1),
        ),
    };
    Ok(SyntheticDir {
        corpus: Corpus::from_triplets(num_docs, vocab_size, triplets)?,
        network: DocumentNetwork::from_edges(num_docs, edges)?,
        truth,
    })
}

fn open_csv(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| NrtError::io(format!("reading {}", path.display()), e))?;
    Ok(csv::Reader::from_reader(file))
}

// data row i sits on line i + 2
fn parse_error(path: &Path, row: usize, e: csv::Error) -> NrtError {
    NrtError::Parse {
        path: PathBuf::from(path),
        line: e.position().map_or(row + 2, |p| p.line() as usize),
        message: e.to_string(),
    }
}
