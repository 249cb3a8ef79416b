//! Coupled three-level fixed-point iteration.
//!
//! Each sweep reads only the previous state (Jacobi order). Per entity:
//!
//! ```text
//! uT'(t) = aT * sum_{t' cites t} T~(t,t') uT(t') + (1 - aT) * uP(paper(t)) / (|T|/|P|)
//! uP'(p) = aP * sum_{p' cites p} P~(p,p') uP(p') + bP * uF(field(p)) / (|P|/|F|)
//!          + (1 - aP - bP) * max_{t in p} uT(t)
//! uF'(f) = aF * sum_{f' -> f} F~(f,f') uF(f') + (1 - aF) * sum_{p in f} (uP(p) - 1/|P|)_+
//! ```
//!
//! followed by independent l1 normalization of each level. Iteration stops
//! once the largest per-level l1 change drops below the tolerance.

use std::fmt;

use rayon::prelude::*;

use crate::error::SolverError;
use crate::graph::ThreeLevelGraph;
use crate::scalar::Scalar;
use crate::sparse::{column_normalize, SparseWeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Theorem,
    Paper,
    Field,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Theorem, Level::Paper, Level::Field];
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Theorem => "theorem",
            Level::Paper => "paper",
            Level::Field => "field",
        })
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

/// Mixing weights of the iteration plus its stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparameters<S> {
    pub alpha_t: S,
    pub alpha_p: S,
    pub beta_p: S,
    pub alpha_f: S,
    pub tolerance: S,
    pub max_iterations: usize,
}

impl<S: Scalar> Hyperparameters<S> {
    /// Mixing weights with the default tolerance and iteration cap.
    pub fn new(alpha_t: S, alpha_p: S, beta_p: S, alpha_f: S) -> Result<Self, SolverError> {
        let hp = Hyperparameters {
            alpha_t,
            alpha_p,
            beta_p,
            alpha_f,
            tolerance: S::lit(DEFAULT_TOLERANCE),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        };
        hp.validate()?;
        Ok(hp)
    }

    pub fn with_tolerance(mut self, tolerance: S) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// Every mixing weight must lie in the open interval (0, 1) and
    /// `alpha_p + beta_p` must stay strictly below 1.
    pub fn validate(&self) -> Result<(), SolverError> {
        let open_unit = |x: S| x > S::zero() && x < S::one();
        for (name, value) in [
            ("alpha_t", self.alpha_t),
            ("alpha_p", self.alpha_p),
            ("beta_p", self.beta_p),
            ("alpha_f", self.alpha_f),
        ] {
            if !open_unit(value) {
                return Err(SolverError::InvalidHyperparameters(format!(
                    "{name} = {value} is outside (0, 1)"
                )));
            }
        }
        if self.alpha_p + self.beta_p >= S::one() {
            return Err(SolverError::InvalidHyperparameters(format!(
                "alpha_p + beta_p = {} must be < 1",
                self.alpha_p + self.beta_p
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > S::zero()) {
            return Err(SolverError::InvalidHyperparameters(format!(
                "tolerance = {} must be positive",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidHyperparameters(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl<S: Scalar> Default for Hyperparameters<S> {
    /// `(0.6, 0.6, 0.05, 0.85)`, tolerance `1e-9`, 10,000 iterations.
    fn default() -> Self {
        Hyperparameters {
            alpha_t: S::lit(0.6),
            alpha_p: S::lit(0.6),
            beta_p: S::lit(0.05),
            alpha_f: S::lit(0.85),
            tolerance: S::lit(DEFAULT_TOLERANCE),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Per-level score vectors after `iteration` sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreState<S> {
    pub theorem: Vec<S>,
    pub paper: Vec<S>,
    pub field: Vec<S>,
    pub iteration: usize,
}

impl<S: Scalar> ScoreState<S> {
    /// Builds a starting state from arbitrary nonnegative vectors, l1
    /// normalizing each level.
    pub fn normalized(theorem: Vec<S>, paper: Vec<S>, field: Vec<S>) -> Result<Self, SolverError> {
        Ok(ScoreState {
            theorem: normalize_level(theorem, Level::Theorem)?,
            paper: normalize_level(paper, Level::Paper)?,
            field: normalize_level(field, Level::Field)?,
            iteration: 0,
        })
    }

    pub fn level(&self, level: Level) -> &[S] {
        match level {
            Level::Theorem => &self.theorem,
            Level::Paper => &self.paper,
            Level::Field => &self.field,
        }
    }

    /// Largest per-level l1 distance to `other`.
    pub fn residual(&self, other: &ScoreState<S>) -> Result<S, SolverError> {
        let mut worst = S::zero();
        for level in Level::ALL {
            let (a, b) = (self.level(level), other.level(level));
            if a.len() != b.len() {
                return Err(SolverError::DimensionMismatch {
                    level,
                    left: a.len(),
                    right: b.len(),
                });
            }
            let distance = a
                .iter()
                .zip(b)
                .fold(S::zero(), |acc, (&x, &y)| acc + (x - y).abs());
            worst = worst.max(distance);
        }
        Ok(worst)
    }
}

/// Column-normalized copies of the three weight matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrices<S> {
    pub theorem: SparseWeightMatrix<S>,
    pub paper: SparseWeightMatrix<S>,
    pub field: SparseWeightMatrix<S>,
}

impl<S: Scalar> NormalizedMatrices<S> {
    pub fn new(graph: &ThreeLevelGraph<S>) -> Self {
        NormalizedMatrices {
            theorem: column_normalize(graph.theorem_matrix()),
            paper: column_normalize(graph.paper_matrix()),
            field: column_normalize(graph.field_matrix()),
        }
    }
}

/// Uniform start: every entity of a level gets `1 / |level|`.
pub fn init_state<S: Scalar>(graph: &ThreeLevelGraph<S>) -> Result<ScoreState<S>, SolverError> {
    let uniform = |n: usize, level: Level| {
        if n == 0 {
            Err(SolverError::EmptyLevel(level))
        } else {
            Ok(vec![S::one() / S::count(n); n])
        }
    };
    Ok(ScoreState {
        theorem: uniform(graph.theorem_count(), Level::Theorem)?,
        paper: uniform(graph.paper_count(), Level::Paper)?,
        field: uniform(graph.field_count(), Level::Field)?,
        iteration: 0,
    })
}

fn check_dimensions<S: Scalar>(
    state: &ScoreState<S>,
    graph: &ThreeLevelGraph<S>,
) -> Result<(), SolverError> {
    for (level, have, want) in [
        (Level::Theorem, state.theorem.len(), graph.theorem_count()),
        (Level::Paper, state.paper.len(), graph.paper_count()),
        (Level::Field, state.field.len(), graph.field_count()),
    ] {
        if want == 0 {
            return Err(SolverError::EmptyLevel(level));
        }
        if have != want {
            return Err(SolverError::DimensionMismatch {
                level,
                left: have,
                right: want,
            });
        }
    }
    Ok(())
}

/// l1 normalization in index order. A level with a single entity is
/// always `[1]`, the only unit-l1 nonnegative vector of length one.
fn normalize_level<S: Scalar>(values: Vec<S>, level: Level) -> Result<Vec<S>, SolverError> {
    match values.len() {
        0 => Err(SolverError::EmptyLevel(level)),
        1 => Ok(vec![S::one()]),
        _ => {
            let total = values.iter().fold(S::zero(), |acc, &v| acc + v);
            if !(total.is_finite() && total > S::zero()) {
                return Err(SolverError::Degenerate(level));
            }
            Ok(values.into_iter().map(|v| v / total).collect())
        }
    }
}

fn row_dot<S: Scalar>(matrix: &SparseWeightMatrix<S>, row: usize, scores: &[S]) -> S {
    matrix
        .row(row)
        .fold(S::zero(), |acc, (col, w)| acc + w * scores[col])
}

/// One synchronous sweep over all three levels.
///
/// Entities are processed in parallel on the current rayon pool; each
/// entity's sums run sequentially in index order, so the output does not
/// depend on the number of threads.
pub fn iterate_once<S: Scalar>(
    state: &ScoreState<S>,
    graph: &ThreeLevelGraph<S>,
    norm: &NormalizedMatrices<S>,
    hp: &Hyperparameters<S>,
) -> Result<ScoreState<S>, SolverError> {
    check_dimensions(state, graph)?;
    let one = S::one();
    let n_theorems = S::count(graph.theorem_count());
    let n_papers = S::count(graph.paper_count());
    let n_fields = S::count(graph.field_count());
    let theorems_per_paper = n_theorems / n_papers;
    let papers_per_field = n_papers / n_fields;
    let average_paper = one / n_papers;

    let theorem: Vec<S> = (0..graph.theorem_count())
        .into_par_iter()
        .map(|t| {
            let cited_by = row_dot(&norm.theorem, t, &state.theorem);
            let inherited = state.paper[graph.theorem_paper[t]] / theorems_per_paper;
            hp.alpha_t * cited_by + (one - hp.alpha_t) * inherited
        })
        .collect();

    let paper: Vec<S> = (0..graph.paper_count())
        .into_par_iter()
        .map(|p| {
            let cited_by = row_dot(&norm.paper, p, &state.paper);
            let inherited = state.field[graph.paper_field[p]] / papers_per_field;
            let best_theorem = graph.paper_theorems[p]
                .iter()
                .fold(S::zero(), |acc, &t| acc.max(state.theorem[t]));
            hp.alpha_p * cited_by
                + hp.beta_p * inherited
                + (one - hp.alpha_p - hp.beta_p) * best_theorem
        })
        .collect();

    let field: Vec<S> = (0..graph.field_count())
        .into_par_iter()
        .map(|f| {
            let cited_by = row_dot(&norm.field, f, &state.field);
            let excess = graph.field_papers[f].iter().fold(S::zero(), |acc, &p| {
                acc + (state.paper[p] - average_paper).max(S::zero())
            });
            hp.alpha_f * cited_by + (one - hp.alpha_f) * excess
        })
        .collect();

    Ok(ScoreState {
        theorem: normalize_level(theorem, Level::Theorem)?,
        paper: normalize_level(paper, Level::Paper)?,
        field: normalize_level(field, Level::Field)?,
        iteration: state.iteration + 1,
    })
}

/// True iff the largest per-level l1 change is below `hp.tolerance`.
pub fn has_converged<S: Scalar>(
    prev: &ScoreState<S>,
    next: &ScoreState<S>,
    hp: &Hyperparameters<S>,
) -> Result<bool, SolverError> {
    Ok(prev.residual(next)? < hp.tolerance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<S> {
    pub converged: bool,
    pub iterations: usize,
    /// Residual of the final sweep.
    pub residual: S,
    /// Residual of every sweep, in order.
    pub residual_history: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub state: ScoreState<S>,
    pub report: ConvergenceReport<S>,
}

#[derive(Debug, Clone)]
pub struct SolveOptions<S> {
    /// Size of a dedicated thread pool; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Starting state; uniform when `None`.
    pub initial: Option<ScoreState<S>>,
}

impl<S> Default for SolveOptions<S> {
    fn default() -> Self {
        SolveOptions {
            workers: None,
            initial: None,
        }
    }
}

/// Runs the iteration from the uniform start until convergence or the
/// iteration cap. A run that hits the cap is returned with
/// `report.converged == false`.
pub fn compute_scores<S: Scalar>(
    graph: &ThreeLevelGraph<S>,
    hp: &Hyperparameters<S>,
) -> Result<Solution<S>, SolverError> {
    compute_scores_with(graph, hp, &SolveOptions::default())
}

pub fn compute_scores_with<S: Scalar>(
    graph: &ThreeLevelGraph<S>,
    hp: &Hyperparameters<S>,
    options: &SolveOptions<S>,
) -> Result<Solution<S>, SolverError> {
    hp.validate()?;
    let state = match &options.initial {
        Some(initial) => {
            check_dimensions(initial, graph)?;
            ScoreState {
                iteration: 0,
                ..initial.clone()
            }
        }
        None => init_state(graph)?,
    };
    match options.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .expect("failed to build solver thread pool");
            pool.install(|| run(graph, hp, state))
        }
        None => run(graph, hp, state),
    }
}

fn run<S: Scalar>(
    graph: &ThreeLevelGraph<S>,
    hp: &Hyperparameters<S>,
    mut state: ScoreState<S>,
) -> Result<Solution<S>, SolverError> {
    let norm = NormalizedMatrices::new(graph);
    let mut history = Vec::new();
    let mut converged = false;
    while state.iteration < hp.max_iterations {
        let next = iterate_once(&state, graph, &norm, hp)?;
        let residual = state.residual(&next)?;
        history.push(residual);
        state = next;
        if residual < hp.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "no convergence after {} iterations (residual {:?})",
            state.iteration,
            history.last()
        );
    }
    Ok(Solution {
        report: ConvergenceReport {
            converged,
            iterations: state.iteration,
            residual: history.last().copied().unwrap_or_else(S::zero),
            residual_history: history,
        },
        state,
    })
}
