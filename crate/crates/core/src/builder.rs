//! Assembly of a [`ThreeLevelGraph`] from validated records.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::BuildError;
use crate::field::{msc_to_field, FieldId};
use crate::graph::ThreeLevelGraph;
use crate::records::{validate_records, GraphRecords, PaperRecord, TheoremRecord};
use crate::scalar::Scalar;
use crate::sparse::SparseWeightMatrix;

pub const SAME_PAPER_WEIGHT: f64 = 0.05;
pub const SHARED_AUTHOR_WEIGHT: f64 = 0.1;
pub const INDEPENDENT_WEIGHT: f64 = 1.0;

/// Weight of theorem `src` citing theorem `dst`: 0.05 within one paper,
/// 0.1 across papers with a common author, 1 otherwise.
pub fn theorem_edge_weight<S: Scalar>(
    src: &TheoremRecord,
    dst: &TheoremRecord,
    src_paper: &PaperRecord,
    dst_paper: &PaperRecord,
    cites: bool,
) -> S {
    if !cites {
        S::zero()
    } else if src.paper_id == dst.paper_id {
        S::lit(SAME_PAPER_WEIGHT)
    } else if src_paper.shares_author_with(dst_paper) {
        S::lit(SHARED_AUTHOR_WEIGHT)
    } else {
        S::lit(INDEPENDENT_WEIGHT)
    }
}

/// Weight of paper `src` citing paper `dst`: 0.1 with a common author, 1 otherwise.
pub fn paper_edge_weight<S: Scalar>(src: &PaperRecord, dst: &PaperRecord, cites: bool) -> S {
    if !cites {
        S::zero()
    } else if src.shares_author_with(dst) {
        S::lit(SHARED_AUTHOR_WEIGHT)
    } else {
        S::lit(INDEPENDENT_WEIGHT)
    }
}

/// Field-level matrix: entry `(f_i, f_j)` counts the paper pairs
/// `(p1 in f_i, p2 in f_j)` with a positive paper-level weight, i.e. papers
/// of `f_j` citing papers of `f_i`.
pub fn build_field_matrix<S: Scalar>(
    paper_field: &[usize],
    field_count: usize,
    paper_matrix: &SparseWeightMatrix<S>,
) -> SparseWeightMatrix<S> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (cited, citing, weight) in paper_matrix.entries() {
        if weight > S::zero() {
            *counts
                .entry((paper_field[cited], paper_field[citing]))
                .or_default() += 1;
        }
    }
    let triplets = counts
        .into_iter()
        .map(|((i, j), n)| (i, j, S::count(n)))
        .collect();
    SparseWeightMatrix::from_triplets(field_count, field_count, triplets)
        .expect("field counts are positive and in range")
}

/// Builds the three-level graph.
///
/// Record-level violations (duplicate ids, orphan theorems, malformed codes
/// or dates) abort the build. Citations with unknown endpoints and
/// self-citations are dropped with a warning; repeated citations collapse
/// to one edge.
pub fn build_graph<S: Scalar>(records: &GraphRecords) -> Result<ThreeLevelGraph<S>, BuildError> {
    let report = validate_records(records);
    if let Some(err) = report.first_fatal() {
        return Err(err);
    }
    for violation in &report.violations {
        log::warn!("dropping citation ({}): {violation}", violation.kind());
    }

    let mut paper_records: Vec<&PaperRecord> = records.papers.iter().collect();
    paper_records.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    let papers: Vec<String> = paper_records.iter().map(|p| p.paper_id.clone()).collect();
    let paper_index: HashMap<&str, usize> = papers
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();

    let mut paper_field_ids = Vec::with_capacity(papers.len());
    for paper in &paper_records {
        let field = msc_to_field(&paper.msc_primary).map_err(|source| BuildError::BadPaper {
            paper_id: paper.paper_id.clone(),
            source,
        })?;
        paper_field_ids.push(field);
    }
    let fields: Vec<FieldId> = paper_field_ids
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let paper_field: Vec<usize> = paper_field_ids
        .iter()
        .map(|f| fields.binary_search(f).expect("field collected above"))
        .collect();

    let mut theorems: Vec<TheoremRecord> = records.theorems.clone();
    theorems.sort();
    let theorem_index: HashMap<&TheoremRecord, usize> =
        theorems.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let theorem_paper: Vec<usize> = theorems
        .iter()
        .map(|t| paper_index[t.paper_id.as_str()])
        .collect();

    let mut paper_theorems = vec![Vec::new(); papers.len()];
    for (t, &p) in theorem_paper.iter().enumerate() {
        paper_theorems[p].push(t);
    }
    let mut field_papers = vec![Vec::new(); fields.len()];
    for (p, &f) in paper_field.iter().enumerate() {
        field_papers[f].push(p);
    }

    // (cited row, citing column) pairs, deduplicated and ordered.
    let theorem_edges: BTreeSet<(usize, usize)> = records
        .theorem_citations
        .iter()
        .filter(|c| c.src != c.dst)
        .filter_map(|c| Some((*theorem_index.get(&c.dst)?, *theorem_index.get(&c.src)?)))
        .collect();
    let theorem_edges: Vec<(usize, usize)> = theorem_edges.into_iter().collect();
    let theorem_triplets: Vec<(usize, usize, S)> = theorem_edges
        .par_iter()
        .map(|&(cited, citing)| {
            let weight = theorem_edge_weight(
                &theorems[citing],
                &theorems[cited],
                paper_records[theorem_paper[citing]],
                paper_records[theorem_paper[cited]],
                true,
            );
            (cited, citing, weight)
        })
        .collect();
    let theorem_matrix =
        SparseWeightMatrix::from_triplets(theorems.len(), theorems.len(), theorem_triplets)
            .expect("deduplicated theorem edges");

    let paper_edges: BTreeSet<(usize, usize)> = records
        .paper_citations
        .iter()
        .filter(|c| c.src != c.dst)
        .filter_map(|c| {
            Some((
                *paper_index.get(c.dst.as_str())?,
                *paper_index.get(c.src.as_str())?,
            ))
        })
        .collect();
    let paper_edges: Vec<(usize, usize)> = paper_edges.into_iter().collect();
    let paper_triplets: Vec<(usize, usize, S)> = paper_edges
        .par_iter()
        .map(|&(cited, citing)| {
            let weight = paper_edge_weight(paper_records[citing], paper_records[cited], true);
            (cited, citing, weight)
        })
        .collect();
    let paper_matrix =
        SparseWeightMatrix::from_triplets(papers.len(), papers.len(), paper_triplets)
            .expect("deduplicated paper edges");

    let field_matrix = build_field_matrix(&paper_field, fields.len(), &paper_matrix);

    Ok(ThreeLevelGraph {
        theorems,
        papers,
        fields,
        theorem_matrix,
        paper_matrix,
        field_matrix,
        theorem_paper,
        paper_field,
        paper_theorems,
        field_papers,
    })
}
