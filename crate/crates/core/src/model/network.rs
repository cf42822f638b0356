use std::collections::HashMap;

use crate::error::{NrtError, Result};

/// Undirected document network without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentNetwork {
    num_docs: usize,
    // (a, b) with a < b, sorted, unique
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl DocumentNetwork {
    pub fn empty(num_docs: usize) -> Self {
        DocumentNetwork {
            num_docs,
            edges: Vec::new(),
            neighbors: vec![Vec::new(); num_docs],
        }
    }

    /// Direction is discarded, duplicates merged and self-loops dropped.
    pub fn from_edges(
        num_docs: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut canonical = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= num_docs {
                    return Err(NrtError::IndexOutOfRange {
                        what: "edge endpoint",
                        index: x,
                        bound: num_docs,
                    });
                }
            }
            if a != b {
                canonical.push((a.min(b), a.max(b)));
            }
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut neighbors = vec![Vec::new(); num_docs];
        for &(a, b) in &canonical {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(DocumentNetwork {
            num_docs,
            edges: canonical,
            neighbors,
        })
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, d: usize) -> &[usize] {
        &self.neighbors[d]
    }

    pub fn degree(&self, d: usize) -> usize {
        self.neighbors[d].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_docs && self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Induced subnetwork on `docs`, renumbered in the given order.
    pub fn subnetwork(&self, docs: &[usize]) -> DocumentNetwork {
        let position: HashMap<usize, usize> =
            docs.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let edges = self.edges.iter().filter_map(|(a, b)| {
            Some((*position.get(a)?, *position.get(b)?))
        });
        DocumentNetwork::from_edges(docs.len(), edges).expect("positions are in range")
    }
}
