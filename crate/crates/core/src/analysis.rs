//! Rankings, field-to-field impact, yearly field-score series and
//! cumulative category ratios.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::builder::build_graph;
use crate::error::{BuildError, InputError};
use crate::field::{msc_to_field, FieldId, FIELD_COUNT};
use crate::graph::ThreeLevelGraph;
use crate::ingest::snapshot_filter;
use crate::records::{validate_records, GraphRecords, TheoremKey, YearMonth};
use crate::scalar::Scalar;
use crate::solver::{compute_scores, Hyperparameters, Level, NormalizedMatrices, ScoreState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntityKey {
    Theorem(TheoremKey),
    Paper(String),
    Field(FieldId),
}

impl EntityKey {
    fn cmp_id(&self, other: &EntityKey) -> Ordering {
        match (self, other) {
            (EntityKey::Theorem(a), EntityKey::Theorem(b)) => a.cmp(b),
            (EntityKey::Paper(a), EntityKey::Paper(b)) => a.cmp(b),
            (EntityKey::Field(a), EntityKey::Field(b)) => a.name().cmp(b.name()),
            _ => unreachable!("ranking rows always share a level"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow<S> {
    /// 1-based, restarting in each group when grouped by field.
    pub rank: usize,
    pub entity: EntityKey,
    pub field: FieldId,
    pub score: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable<S> {
    pub level: Level,
    pub grouped_by_field: bool,
    pub rows: Vec<RankingRow<S>>,
}

/// Orders entities by descending score, ties by ascending id, and keeps the
/// first `top_k` (all when `None`), either globally or per field.
pub fn rank_entities<S: Scalar>(
    graph: &ThreeLevelGraph<S>,
    state: &ScoreState<S>,
    level: Level,
    top_k: Option<usize>,
    group_by_field: bool,
) -> Result<RankingTable<S>, InputError> {
    if top_k == Some(0) {
        return Err(InputError::ZeroTopK);
    }
    let mut rows: Vec<RankingRow<S>> = match level {
        Level::Theorem => graph
            .theorems()
            .iter()
            .enumerate()
            .map(|(i, key)| (EntityKey::Theorem(key.clone()), graph.field_of_theorem(i)))
            .collect::<Vec<_>>(),
        Level::Paper => graph
            .papers()
            .iter()
            .enumerate()
            .map(|(i, id)| (EntityKey::Paper(id.clone()), graph.field_of_paper(i)))
            .collect(),
        Level::Field => graph
            .fields()
            .iter()
            .map(|&f| (EntityKey::Field(f), f))
            .collect(),
    }
    .into_iter()
    .zip(state.level(level).iter().copied())
    .map(|((entity, field), score)| RankingRow {
        rank: 0,
        entity,
        field,
        score,
    })
    .collect();

    rows.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.entity.cmp_id(&b.entity))
    });

    let limit = top_k.unwrap_or(usize::MAX);
    let rows = if group_by_field {
        FieldId::ALL
            .iter()
            .flat_map(|&field| {
                rows.iter()
                    .filter(move |r| r.field == field)
                    .take(limit)
                    .cloned()
                    .enumerate()
                    .map(|(i, row)| RankingRow { rank: i + 1, ..row })
            })
            .collect()
    } else {
        rows.into_iter()
            .take(limit)
            .enumerate()
            .map(|(i, row)| RankingRow { rank: i + 1, ..row })
            .collect()
    };

    Ok(RankingTable {
        level,
        grouped_by_field: group_by_field,
        rows,
    })
}

/// Field-to-field impact over all thirteen fields. Row is the source
/// (cited) field, column the target (citing) field.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactMatrix<S> {
    values: [[S; FIELD_COUNT]; FIELD_COUNT],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymmetry<S> {
    pub source: FieldId,
    pub target: FieldId,
    /// `I(source, target) / I(target, source)`; `None` when the reverse
    /// impact is zero.
    pub ratio: Option<S>,
}

impl<S: Scalar> ImpactMatrix<S> {
    pub fn zeros() -> Self {
        ImpactMatrix {
            values: [[S::zero(); FIELD_COUNT]; FIELD_COUNT],
        }
    }

    pub fn from_rows(values: [[S; FIELD_COUNT]; FIELD_COUNT]) -> Self {
        ImpactMatrix { values }
    }

    pub fn get(&self, source: FieldId, target: FieldId) -> S {
        self.values[source.index()][target.index()]
    }

    pub fn rows(&self) -> &[[S; FIELD_COUNT]; FIELD_COUNT] {
        &self.values
    }

    /// Total impact received from `target`'s citing papers.
    pub fn column_mass(&self, target: FieldId) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, row| acc + row[target.index()])
    }

    pub fn asymmetry(&self, source: FieldId, target: FieldId) -> Option<S> {
        let reverse = self.get(target, source);
        (reverse > S::zero()).then(|| self.get(source, target) / reverse)
    }

    /// Asymmetry ratios for every ordered pair of distinct fields.
    pub fn asymmetries(&self) -> Vec<Asymmetry<S>> {
        FieldId::ALL
            .iter()
            .flat_map(|&source| {
                FieldId::ALL
                    .iter()
                    .filter(move |&&target| target != source)
                    .map(move |&target| Asymmetry {
                        source,
                        target,
                        ratio: self.asymmetry(source, target),
                    })
            })
            .collect()
    }
}

/// `I(f, f') = sum over p in f, p' in f' of P~(p, p') * u_P(p')`.
pub fn field_impact<S: Scalar>(
    graph: &ThreeLevelGraph<S>,
    norm: &NormalizedMatrices<S>,
    paper_scores: &[S],
) -> ImpactMatrix<S> {
    let mut impact = ImpactMatrix::zeros();
    for (cited, citing, weight) in norm.paper.entries() {
        let source = graph.field_of_paper(cited).index();
        let target = graph.field_of_paper(citing).index();
        impact.values[source][target] =
            impact.values[source][target] + weight * paper_scores[citing];
    }
    impact
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YearStatus {
    Converged,
    NotConverged,
    /// The snapshot could not be scored (empty level, degenerate iteration).
    Absent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearScores<S> {
    pub year: i32,
    pub status: YearStatus,
    pub iterations: usize,
    /// Indexed by [`FieldId::index`]; `None` for fields without papers
    /// in this snapshot and for absent years.
    pub scores: [Option<S>; FIELD_COUNT],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSeries<S> {
    pub hyperparameters: Hyperparameters<S>,
    pub years: Vec<YearScores<S>>,
}

fn check_years(years: &RangeInclusive<i32>) -> Result<(), InputError> {
    if years.is_empty() {
        Err(InputError::EmptyYearRange {
            from: *years.start(),
            to: *years.end(),
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solver(#[from] crate::error::SolverError),
}

/// Field scores of each yearly snapshot. Years are scored independently
/// and in parallel.
pub fn field_series<S: Scalar>(
    records: &GraphRecords,
    years: RangeInclusive<i32>,
    hp: &Hyperparameters<S>,
) -> Result<FieldSeries<S>, SeriesError> {
    check_years(&years)?;
    hp.validate()?;
    if let Some(err) = validate_records(records).first_fatal() {
        return Err(err.into());
    }
    let years: Vec<i32> = years.collect();
    let rows = years
        .par_iter()
        .map(|&year| score_year(records, year, hp))
        .collect();
    Ok(FieldSeries {
        hyperparameters: *hp,
        years: rows,
    })
}

fn score_year<S: Scalar>(
    records: &GraphRecords,
    year: i32,
    hp: &Hyperparameters<S>,
) -> YearScores<S> {
    let absent = |reason: String| YearScores {
        year,
        status: YearStatus::Absent(reason),
        iterations: 0,
        scores: [None; FIELD_COUNT],
    };
    let snapshot = snapshot_filter(records, year);
    let graph = match build_graph::<S>(&snapshot) {
        Ok(graph) => graph,
        Err(err) => return absent(err.to_string()),
    };
    match compute_scores(&graph, hp) {
        Ok(solution) => {
            let mut scores = [None; FIELD_COUNT];
            for (&field, &score) in graph.fields().iter().zip(&solution.state.field) {
                scores[field.index()] = Some(score);
            }
            YearScores {
                year,
                status: if solution.report.converged {
                    YearStatus::Converged
                } else {
                    YearStatus::NotConverged
                },
                iterations: solution.report.iterations,
                scores,
            }
        }
        Err(err) => absent(err.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub year: i32,
    /// Cumulative paper counts per field up to December of `year`.
    pub counts: [usize; FIELD_COUNT],
    /// `None` when no paper is dated on or before the year.
    pub ratios: Option<[f64; FIELD_COUNT]>,
}

/// Share of each field among all papers dated no later than December of
/// each year. Papers with an unparseable MSC code are not counted.
pub fn category_ratios(
    records: &GraphRecords,
    years: RangeInclusive<i32>,
) -> Result<Vec<RatioRow>, InputError> {
    check_years(&years)?;
    let classified: Vec<(YearMonth, FieldId)> = records
        .papers
        .iter()
        .filter_map(|p| Some((p.first_version_date, msc_to_field(&p.msc_primary).ok()?)))
        .collect();
    Ok(years
        .map(|year| {
            let cutoff = YearMonth::end_of_year(year);
            let mut counts = [0usize; FIELD_COUNT];
            for (date, field) in &classified {
                if *date <= cutoff {
                    counts[field.index()] += 1;
                }
            }
            let total: usize = counts.iter().sum();
            let ratios = (total > 0).then(|| counts.map(|c| c as f64 / total as f64));
            RatioRow {
                year,
                counts,
                ratios,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::{Citation, PaperRecord};

    fn paper(id: &str, msc: &str, year: i32) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            msc_primary: msc.into(),
            author_ids: [id.to_string()].into(),
            first_version_date: YearMonth::new(year, 6).unwrap(),
        }
    }

    fn three_papers() -> ThreeLevelGraph<f64> {
        build_graph(&GraphRecords {
            papers: vec![
                paper("a", "20", 2000),
                paper("b", "20", 2000),
                paper("c", "35", 2000),
            ],
            theorems: vec![
                TheoremKey::new("a", "t"),
                TheoremKey::new("b", "t"),
                TheoremKey::new("c", "t"),
            ],
            ..Default::default()
        })
        .unwrap()
    }

    fn state(paper: Vec<f64>) -> ScoreState<f64> {
        ScoreState {
            theorem: vec![1.0 / 3.0; 3],
            paper,
            field: vec![0.5, 0.5],
            iteration: 1,
        }
    }

    #[test]
    fn ranks_by_score() {
        let g = three_papers();
        let t = rank_entities(
            &g,
            &state(vec![0.2, 0.5, 0.3]),
            Level::Paper,
            Some(2),
            false,
        )
        .unwrap();
        let ids: Vec<_> = t.rows.iter().map(|r| r.entity.clone()).collect();
        assert_eq!(
            ids,
            vec![EntityKey::Paper("b".into()), EntityKey::Paper("c".into())]
        );
        assert_eq!(t.rows[0].rank, 1);
        assert_eq!(t.rows[1].field, FieldId::Pde);
    }

    #[test]
    fn ties_break_by_id() {
        let g = three_papers();
        let t =
            rank_entities(&g, &state(vec![0.25, 0.25, 0.5]), Level::Paper, None, false).unwrap();
        let ids: Vec<_> = t.rows.iter().map(|r| r.entity.clone()).collect();
        assert_eq!(
            ids,
            ["c", "a", "b"].map(|s| EntityKey::Paper(s.into())).to_vec()
        );
    }

    #[test]
    fn grouped_ranking_restarts_per_field() {
        let g = three_papers();
        let t = rank_entities(
            &g,
            &state(vec![0.2, 0.5, 0.3]),
            Level::Paper,
            Some(10),
            true,
        )
        .unwrap();
        let summary: Vec<_> = t.rows.iter().map(|r| (r.field, r.rank)).collect();
        assert_eq!(
            summary,
            vec![
                (FieldId::Algebra, 1),
                (FieldId::Algebra, 2),
                (FieldId::Pde, 1)
            ]
        );
    }

    #[test]
    fn zero_top_k_rejected() {
        let g = three_papers();
        assert_eq!(
            rank_entities(
                &g,
                &state(vec![0.2, 0.5, 0.3]),
                Level::Paper,
                Some(0),
                false
            ),
            Err(InputError::ZeroTopK)
        );
    }

    #[test]
    fn single_citation_impact() {
        // c (PDE) cites a (Algebra) and nothing else
        let records = GraphRecords {
            papers: vec![
                paper("a", "20", 2000),
                paper("b", "20", 2000),
                paper("c", "35", 2000),
            ],
            paper_citations: vec![Citation::new("c".into(), "a".into())],
            ..Default::default()
        };
        let g = build_graph::<f64>(&records).unwrap();
        let norm = NormalizedMatrices::new(&g);
        let impact = field_impact(&g, &norm, &[0.3, 0.3, 0.4]);
        assert_eq!(impact.get(FieldId::Algebra, FieldId::Pde), 0.4);
        let total: f64 = impact.rows().iter().flatten().sum();
        assert_eq!(total, 0.4);
        assert_eq!(impact.asymmetry(FieldId::Algebra, FieldId::Pde), None);
        assert_eq!(impact.asymmetry(FieldId::Pde, FieldId::Algebra), Some(0.0));
    }

    #[test]
    fn impact_of_citation_free_graph_is_zero() {
        let g = three_papers();
        let impact = field_impact(&g, &NormalizedMatrices::new(&g), &[0.2, 0.5, 0.3]);
        assert_eq!(impact, ImpactMatrix::zeros());
        assert_eq!(impact.asymmetries().len(), FIELD_COUNT * (FIELD_COUNT - 1));
    }

    #[test]
    fn ratios_are_cumulative() {
        let records = GraphRecords {
            papers: vec![
                paper("a", "20", 1999),
                paper("b", "20", 2000),
                paper("c", "16", 2000),
                paper("d", "35", 2000),
                paper("e", "35", 2003),
            ],
            ..Default::default()
        };
        let rows = category_ratios(&records, 1998..=2003).unwrap();
        assert_eq!(rows[0].ratios, None);
        let y2000 = rows.iter().find(|r| r.year == 2000).unwrap();
        assert_eq!(y2000.ratios.unwrap()[FieldId::Algebra.index()], 0.75);
        assert_eq!(rows[5].counts[FieldId::Pde.index()], 2);
        let (from, to) = (2001, 2000);
        assert!(category_ratios(&records, from..=to).is_err());
    }

    #[test]
    fn one_paper_per_field_gives_equal_ratios() {
        let codes = [
            "06", "11", "32", "19", "26", "31", "37", "70", "60", "90", "65", "62", "01",
        ];
        let records = GraphRecords {
            papers: codes
                .iter()
                .enumerate()
                .map(|(i, code)| PaperRecord {
                    first_version_date: YearMonth::new(1991, 1).unwrap(),
                    ..paper(&format!("p{i}"), code, 1991)
                })
                .collect(),
            ..Default::default()
        };
        for row in category_ratios(&records, 1991..=1995).unwrap() {
            let ratios = row.ratios.unwrap();
            assert!(ratios.iter().all(|&r| r == 1.0 / 13.0));
        }
    }
}
