//! Dataset ingestion, synthetic generation and cross-validation splits.

mod citation;
mod folds;
mod synthetic;

pub use citation::{load_citation_dataset, CitationDataset, LoadReport};
pub use folds::{kfold_split, FoldSplit};
pub use synthetic::{generate_synthetic, SyntheticGroundTruth, LINK_THRESHOLD};
