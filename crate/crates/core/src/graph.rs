//! The assembled three-level graph.

use crate::field::FieldId;
use crate::records::TheoremKey;
use crate::sparse::SparseWeightMatrix;

/// Immutable theorem/paper/field graph.
///
/// Entities at each level are indexed lexicographically by id. Weight
/// matrices use the convention that entry `(i, j)` is the weight of entity
/// `j` citing entity `i`, so column `j` lists everything `j` cites and row
/// `i` lists everything citing `i`.
///
/// Containment edges (theorem in paper, paper in field) are not stored in
/// the matrices; they are the four cross-level maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelGraph<S> {
    pub(crate) theorems: Vec<TheoremKey>,
    pub(crate) papers: Vec<String>,
    pub(crate) fields: Vec<FieldId>,
    pub(crate) theorem_matrix: SparseWeightMatrix<S>,
    pub(crate) paper_matrix: SparseWeightMatrix<S>,
    pub(crate) field_matrix: SparseWeightMatrix<S>,
    pub(crate) theorem_paper: Vec<usize>,
    pub(crate) paper_field: Vec<usize>,
    pub(crate) paper_theorems: Vec<Vec<usize>>,
    pub(crate) field_papers: Vec<Vec<usize>>,
}

impl<S> ThreeLevelGraph<S> {
    pub fn theorems(&self) -> &[TheoremKey] {
        &self.theorems
    }

    pub fn papers(&self) -> &[String] {
        &self.papers
    }

    /// Fields with at least one paper, in canonical order.
    pub fn fields(&self) -> &[FieldId] {
        &self.fields
    }

    pub fn theorem_count(&self) -> usize {
        self.theorems.len()
    }

    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn theorem_matrix(&self) -> &SparseWeightMatrix<S> {
        &self.theorem_matrix
    }

    pub fn paper_matrix(&self) -> &SparseWeightMatrix<S> {
        &self.paper_matrix
    }

    pub fn field_matrix(&self) -> &SparseWeightMatrix<S> {
        &self.field_matrix
    }

    /// Owning paper of each theorem.
    pub fn theorem_paper(&self) -> &[usize] {
        &self.theorem_paper
    }

    /// Local field index of each paper.
    pub fn paper_field(&self) -> &[usize] {
        &self.paper_field
    }

    pub fn paper_theorems(&self) -> &[Vec<usize>] {
        &self.paper_theorems
    }

    pub fn field_papers(&self) -> &[Vec<usize>] {
        &self.field_papers
    }

    pub fn paper_index(&self, paper_id: &str) -> Option<usize> {
        self.papers
            .binary_search_by(|p| p.as_str().cmp(paper_id))
            .ok()
    }

    pub fn theorem_index(&self, key: &TheoremKey) -> Option<usize> {
        self.theorems.binary_search(key).ok()
    }

    pub fn field_index(&self, field: FieldId) -> Option<usize> {
        self.fields.binary_search(&field).ok()
    }

    pub fn field_of_paper(&self, paper: usize) -> FieldId {
        self.fields[self.paper_field[paper]]
    }

    pub fn field_of_theorem(&self, theorem: usize) -> FieldId {
        self.field_of_paper(self.theorem_paper[theorem])
    }
}
