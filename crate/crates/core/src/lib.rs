//! Influence scores on a three-level citation graph of theorems, papers and
//! mathematical fields.
//!
//! Theorems cite theorems, papers cite papers, and fields are linked by the
//! citations between their papers. Each theorem also belongs to a paper and
//! each paper to one field. [`compute_scores`] runs a PageRank-style fixed
//! point in which every level mixes the influence it receives through
//! citations with influence passed up or down the hierarchy.
//!
//! ```
//! use mathrank::{build_graph, compute_scores, GraphRecords, Hyperparameters};
//! # use mathrank::{PaperRecord, TheoremKey, YearMonth};
//! # let records = GraphRecords {
//! #     papers: vec![PaperRecord {
//! #         paper_id: "math/0001".into(),
//! #         msc_primary: "14".into(),
//! #         author_ids: Default::default(),
//! #         first_version_date: YearMonth::new(2000, 1).unwrap(),
//! #     }],
//! #     theorems: vec![TheoremKey::new("math/0001", "theorem 1")],
//! #     ..Default::default()
//! # };
//! let graph = build_graph::<f64>(&records)?;
//! let solution = compute_scores(&graph, &Hyperparameters::default())?;
//! assert!(solution.report.converged);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the type
//! aliases at the crate root fix it to `f64`.

pub mod analysis;
pub mod builder;
pub mod error;
pub mod field;
pub mod graph;
pub mod ingest;
pub mod records;
pub mod scalar;
pub mod solver;
pub mod sparse;

pub use analysis::{
    category_ratios, field_impact, field_series, rank_entities, Asymmetry, EntityKey, FieldSeries,
    ImpactMatrix, RankingRow, RankingTable, RatioRow, SeriesError, YearScores, YearStatus,
};
pub use builder::{build_field_matrix, build_graph, paper_edge_weight, theorem_edge_weight};
pub use error::{BuildError, IngestError, InputError, SolverError};
pub use field::{msc_to_field, FieldId, FIELD_COUNT};
pub use graph::ThreeLevelGraph;
pub use ingest::{emit_corpus, parse_corpus, snapshot_filter, CorpusPaths, ParseReport};
pub use records::{
    validate_records, Citation, CitationLevel, GraphRecords, PaperCitation, PaperRecord,
    TheoremCitation, TheoremKey, TheoremRecord, ValidationReport, Violation, YearMonth,
};
pub use scalar::Scalar;
pub use solver::{
    compute_scores, compute_scores_with, has_converged, init_state, iterate_once,
    ConvergenceReport, Hyperparameters, Level, NormalizedMatrices, ScoreState, Solution,
    SolveOptions,
};
pub use sparse::{column_normalize, SparseWeightMatrix};

pub type Graph = ThreeLevelGraph<f64>;
pub type Scores = ScoreState<f64>;
pub type Params = Hyperparameters<f64>;
pub type Normalized = NormalizedMatrices<f64>;
pub type WeightMatrix = SparseWeightMatrix<f64>;
pub type Impact = ImpactMatrix<f64>;
pub type Ranking = RankingTable<f64>;
pub type Series = FieldSeries<f64>;

pub type GraphF32 = ThreeLevelGraph<f32>;
pub type ScoresF32 = ScoreState<f32>;
pub type ParamsF32 = Hyperparameters<f32>;
