use std::path::PathBuf;

use thiserror::Error;

use crate::solver::Level;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InputError {
    #[error("malformed MSC code {0:?}: expected two ASCII alphanumeric characters")]
    MalformedMsc(String),
    #[error("malformed year-month {0:?}: expected YYYY-MM")]
    MalformedDate(String),
    #[error("unknown field name {0:?}")]
    UnknownField(String),
    #[error("top_k must be at least 1")]
    ZeroTopK,
    #[error("empty year range {from}..={to}")]
    EmptyYearRange { from: i32, to: i32 },
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("duplicate paper id {0:?}")]
    DuplicatePaper(String),
    #[error("duplicate theorem {theorem_id:?} in paper {paper_id:?}")]
    DuplicateTheorem {
        paper_id: String,
        theorem_id: String,
    },
    #[error("theorem {theorem_id:?} refers to unknown paper {paper_id:?}")]
    OrphanTheorem {
        paper_id: String,
        theorem_id: String,
    },
    #[error("paper {paper_id:?}: {source}")]
    BadPaper {
        paper_id: String,
        #[source]
        source: InputError,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),
    #[error("{0} level is empty")]
    EmptyLevel(Level),
    #[error("{0} level has an all-zero unnormalized score vector")]
    Degenerate(Level),
    #[error("dimension mismatch on {level} level: {left} vs {right}")]
    DimensionMismatch {
        level: Level,
        left: usize,
        right: usize,
    },
}
