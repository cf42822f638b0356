//! Reader for the LINQS citation layout (Cora, Citeseer).
//!
//! `<name>.content` has one document per line: an id, one 0/1 field per
//! vocabulary word and a class label, whitespace separated.
//! `<name>.cites` has one citation per line: `<cited id> <citing id>`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{NrtError, Result};
use crate::model::{Corpus, DocumentNetwork};

/// What happened to the citation records while building the network.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Citation lines read; the dataset's published link count.
    pub citation_records: usize,
    /// Records naming an id absent from the content file (dropped).
    pub unknown_endpoint_records: usize,
    /// Records citing the same document on both ends (dropped).
    pub self_loop_records: usize,
    /// Records repeating an already seen undirected pair (merged).
    pub duplicate_records: usize,
    /// Distinct undirected edges in the network.
    pub undirected_edges: usize,
}

#[derive(Clone, Debug)]
pub struct CitationDataset {
    pub corpus: Corpus,
    pub network: DocumentNetwork,
    pub doc_ids: Vec<String>,
    /// Class labels, kept as opaque metadata.
    pub labels: Vec<String>,
    pub report: LoadReport,
}

pub fn load_citation_dataset(content_path: &Path, cites_path: &Path) -> Result<CitationDataset> {
    let content = fs::read_to_string(content_path)
        .map_err(|e| NrtError::io(format!("reading {}", content_path.display()), e))?;
    let mut doc_ids = Vec::new();
    let mut labels = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut triplets = Vec::new();
    let mut width: Option<usize> = None;

    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 3 {
            return Err(NrtError::Parse {
                path: content_path.to_path_buf(),
                line: lineno,
                message: "expected an id, word fields and a label".into(),
            });
        }
        let words = &fields[1..fields.len() - 1];
        match width {
            None => width = Some(words.len()),
            Some(expected) if expected != words.len() => {
                return Err(NrtError::InconsistentWidth {
                    path: content_path.to_path_buf(),
                    line: lineno,
                    expected,
                    found: words.len(),
                })
            }
            Some(_) => {}
        }
        let doc = doc_ids.len();
        if index.insert(fields[0].to_string(), doc).is_some() {
            return Err(NrtError::Parse {
                path: content_path.to_path_buf(),
                line: lineno,
                message: format!("duplicate document id {}", fields[0]),
            });
        }
        for (word, raw) in words.iter().enumerate() {
            let count: u32 = raw.parse().map_err(|_| NrtError::Parse {
                path: content_path.to_path_buf(),
                line: lineno,
                message: format!("word field {} is not a count: {raw:?}", word + 1),
            })?;
            if count > 0 {
                triplets.push((doc, word, count));
            }
        }
        doc_ids.push(fields[0].to_string());
        labels.push(fields[fields.len() - 1].to_string());
    }
    let vocab_size = width.unwrap_or(0);
    let corpus = Corpus::from_triplets(doc_ids.len(), vocab_size, triplets)?;

    let cites = fs::read_to_string(cites_path)
        .map_err(|e| NrtError::io(format!("reading {}", cites_path.display()), e))?;
    let mut report = LoadReport::default();
    let mut edges = Vec::new();
    for (lineno, line) in cites.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(NrtError::Parse {
                path: cites_path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected two ids, found {}", fields.len()),
            });
        }
        report.citation_records += 1;
        match (index.get(fields[0]), index.get(fields[1])) {
            (Some(&a), Some(&b)) if a == b => report.self_loop_records += 1,
            (Some(&a), Some(&b)) => edges.push((a, b)),
            _ => report.unknown_endpoint_records += 1,
        }
    }
    let kept = edges.len();
    let network = DocumentNetwork::from_edges(doc_ids.len(), edges)?;
    report.undirected_edges = network.num_edges();
    report.duplicate_records = kept - network.num_edges();
    info!(
        "loaded {} documents, {} words, {} citation records ({} unknown endpoints, {} self-loops, {} duplicates)",
        doc_ids.len(),
        vocab_size,
        report.citation_records,
        report.unknown_endpoint_records,
        report.self_loop_records,
        report.duplicate_records
    );

    Ok(CitationDataset {
        corpus,
        network,
        doc_ids,
        labels,
        report,
    })
}
