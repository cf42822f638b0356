use std::ops::Range;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{NrtError, Result};

/// One observed, nonzero entry of the document-by-word count matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub doc: usize,
    pub word: usize,
    pub count: u32,
}

/// Sparse document-by-word count matrix.
///
/// Cells are stored sorted by `(doc, word)`; zero counts are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    num_docs: usize,
    vocab: Vec<String>,
    cells: Vec<Cell>,
    doc_offsets: Vec<usize>,
}

impl Corpus {
    /// Builds a corpus from `(doc, word, count)` triplets. Duplicate
    /// coordinates are summed and zero counts dropped. The vocabulary is
    /// named by index until [`Corpus::with_vocab`] replaces it.
    pub fn from_triplets(
        num_docs: usize,
        vocab_size: usize,
        triplets: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let mut cells = Vec::new();
        for (doc, word, count) in triplets {
            if doc >= num_docs {
                return Err(NrtError::IndexOutOfRange {
                    what: "doc",
                    index: doc,
                    bound: num_docs,
                });
            }
            if word >= vocab_size {
                return Err(NrtError::IndexOutOfRange {
                    what: "word",
                    index: word,
                    bound: vocab_size,
                });
            }
            if count > 0 {
                cells.push(Cell { doc, word, count });
            }
        }
        cells.sort_unstable_by_key(|c| (c.doc, c.word));
        cells.dedup_by(|next, kept| {
            if next.doc == kept.doc && next.word == kept.word {
                kept.count += next.count;
                true
            } else {
                false
            }
        });

        let mut doc_offsets = vec![0usize; num_docs + 1];
        for c in &cells {
            doc_offsets[c.doc + 1] += 1;
        }
        for d in 0..num_docs {
            doc_offsets[d + 1] += doc_offsets[d];
        }

        Ok(Corpus {
            num_docs,
            vocab: (0..vocab_size).map(|n| n.to_string()).collect(),
            cells,
            doc_offsets,
        })
    }

    pub fn with_vocab(mut self, vocab: Vec<String>) -> Result<Self> {
        if vocab.len() != self.vocab.len() {
            return Err(NrtError::IndexOutOfRange {
                what: "vocabulary length",
                index: vocab.len(),
                bound: self.vocab.len(),
            });
        }
        self.vocab = vocab;
        Ok(self)
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Range of cell indices belonging to document `d`.
    pub fn doc_cell_range(&self, d: usize) -> Range<usize> {
        self.doc_offsets[d]..self.doc_offsets[d + 1]
    }

    pub fn doc_cells(&self, d: usize) -> &[Cell] {
        &self.cells[self.doc_cell_range(d)]
    }

    /// Position of `(d, n)` among the stored cells, if observed.
    pub fn cell_index(&self, d: usize, n: usize) -> Option<usize> {
        if d >= self.num_docs {
            return None;
        }
        let range = self.doc_cell_range(d);
        self.cells[range.clone()]
            .binary_search_by_key(&n, |c| c.word)
            .ok()
            .map(|i| range.start + i)
    }

    pub fn count(&self, d: usize, n: usize) -> u32 {
        self.cell_index(d, n).map_or(0, |i| self.cells[i].count)
    }

    pub fn doc_length(&self, d: usize) -> u64 {
        self.doc_cells(d).iter().map(|c| c.count as u64).sum()
    }

    pub fn total_tokens(&self) -> u64 {
        self.cells.iter().map(|c| c.count as u64).sum()
    }

    /// Corpus restricted to `docs`, renumbered in the given order.
    pub fn subset(&self, docs: &[usize]) -> Corpus {
        let triplets = docs.iter().enumerate().flat_map(|(new, &old)| {
            self.doc_cells(old)
                .iter()
                .map(move |c| (new, c.word, c.count))
        });
        let mut out = Corpus::from_triplets(docs.len(), self.vocab_size(), triplets)
            .expect("subset indices come from a valid corpus");
        out.vocab = self.vocab.clone();
        out
    }

    /// SHA-256 over the dimensions and cell triplets, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.num_docs as u64).to_le_bytes());
        hasher.update((self.vocab.len() as u64).to_le_bytes());
        for c in &self.cells {
            hasher.update((c.doc as u64).to_le_bytes());
            hasher.update((c.word as u64).to_le_bytes());
            hasher.update(c.count.to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
