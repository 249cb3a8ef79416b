//! Test support for mathrank: a dense reference implementation of the
//! score iteration and seeded random corpora.
//!
//! The reference model is built straight from [`GraphRecords`] with its own
//! indexing, its own MSC table and dense matrices, and shares no code path
//! with the sparse engine beyond the record types.

pub mod corpus;
pub mod dense;

pub use corpus::{random_corpus, relabel_papers, shuffled, CorpusShape};
pub use dense::{DenseModel, DenseRun, DenseState};

/// Largest absolute entrywise difference.
pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
