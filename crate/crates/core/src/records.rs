//! Raw corpus records as ingested, before graph assembly, and the
//! validation pass that audits them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BuildError, InputError};
use crate::field::check_msc_code;

/// Calendar year and month of a paper's first arXiv version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YearMonth {
    pub year: i32,
    pub month: u8,
}

impl YearMonth {
    pub fn new(year: i32, month: u8) -> Result<Self, InputError> {
        let ym = YearMonth { year, month };
        if ym.is_valid() {
            Ok(ym)
        } else {
            Err(InputError::MalformedDate(format!("{year:04}-{month:02}")))
        }
    }

    pub fn is_valid(&self) -> bool {
        (0..=9999).contains(&self.year) && (1..=12).contains(&self.month)
    }

    /// Last month of `year`, the inclusive upper bound of a yearly snapshot.
    pub fn end_of_year(year: i32) -> Self {
        YearMonth { year, month: 12 }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InputError::MalformedDate(s.to_string());
        let (year, month) = s.split_once('-').ok_or_else(bad)?;
        if year.len() != 4 || month.len() != 2 {
            return Err(bad());
        }
        if !year
            .bytes()
            .chain(month.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let year: i32 = year.parse().map_err(|_| bad())?;
        let month: u8 = month.parse().map_err(|_| bad())?;
        YearMonth::new(year, month).map_err(|_| bad())
    }
}

impl TryFrom<String> for YearMonth {
    type Error = InputError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<YearMonth> for String {
    fn from(value: YearMonth) -> Self {
        value.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub msc_primary: String,
    pub author_ids: BTreeSet<String>,
    pub first_version_date: YearMonth,
}

impl PaperRecord {
    pub fn shares_author_with(&self, other: &PaperRecord) -> bool {
        !self.author_ids.is_disjoint(&other.author_ids)
    }
}

/// A theorem is identified by its paper plus a paper-local label such as
/// `"lemma 3.3"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TheoremKey {
    pub paper_id: String,
    pub theorem_id: String,
}

impl TheoremKey {
    pub fn new(paper_id: impl Into<String>, theorem_id: impl Into<String>) -> Self {
        TheoremKey {
            paper_id: paper_id.into(),
            theorem_id: theorem_id.into(),
        }
    }
}

impl fmt::Display for TheoremKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.paper_id, self.theorem_id)
    }
}

pub type TheoremRecord = TheoremKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CitationLevel {
    Theorem,
    Paper,
}

impl fmt::Display for CitationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CitationLevel::Theorem => "theorem",
            CitationLevel::Paper => "paper",
        })
    }
}

/// Directed citation: `src` cites `dst`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Citation<K> {
    pub src: K,
    pub dst: K,
}

impl<K> Citation<K> {
    pub fn new(src: K, dst: K) -> Self {
        Citation { src, dst }
    }
}

pub type TheoremCitation = Citation<TheoremKey>;
pub type PaperCitation = Citation<String>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphRecords {
    pub papers: Vec<PaperRecord>,
    pub theorems: Vec<TheoremRecord>,
    pub theorem_citations: Vec<TheoremCitation>,
    pub paper_citations: Vec<PaperCitation>,
}

impl GraphRecords {
    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
            && self.theorems.is_empty()
            && self.theorem_citations.is_empty()
            && self.paper_citations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicatePaper(String),
    DuplicateTheorem(TheoremKey),
    OrphanTheorem(TheoremKey),
    MalformedDate {
        paper_id: String,
        date: YearMonth,
    },
    MalformedMsc {
        paper_id: String,
        code: String,
    },
    DanglingTheoremCitation(TheoremCitation),
    DanglingPaperCitation(PaperCitation),
    SelfCitation {
        level: CitationLevel,
        entity: String,
    },
}

impl Violation {
    /// Record-level problems that make assembly impossible. Edge-level
    /// problems are not fatal: the builder drops the edge.
    pub fn is_fatal(&self) -> bool {
        !matches!(
            self,
            Violation::DanglingTheoremCitation(_)
                | Violation::DanglingPaperCitation(_)
                | Violation::SelfCitation { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DuplicatePaper(_) => "duplicate_paper",
            Violation::DuplicateTheorem(_) => "duplicate_theorem",
            Violation::OrphanTheorem(_) => "orphan_theorem",
            Violation::MalformedDate { .. } => "malformed_date",
            Violation::MalformedMsc { .. } => "malformed_msc",
            Violation::DanglingTheoremCitation(_) => "dangling_theorem_citation",
            Violation::DanglingPaperCitation(_) => "dangling_paper_citation",
            Violation::SelfCitation { .. } => "self_citation",
        }
    }

    fn to_build_error(&self) -> Option<BuildError> {
        Some(match self {
            Violation::DuplicatePaper(id) => BuildError::DuplicatePaper(id.clone()),
            Violation::DuplicateTheorem(key) => BuildError::DuplicateTheorem {
                paper_id: key.paper_id.clone(),
                theorem_id: key.theorem_id.clone(),
            },
            Violation::OrphanTheorem(key) => BuildError::OrphanTheorem {
                paper_id: key.paper_id.clone(),
                theorem_id: key.theorem_id.clone(),
            },
            Violation::MalformedDate { paper_id, date } => BuildError::BadPaper {
                paper_id: paper_id.clone(),
                source: InputError::MalformedDate(date.to_string()),
            },
            Violation::MalformedMsc { paper_id, code } => BuildError::BadPaper {
                paper_id: paper_id.clone(),
                source: InputError::MalformedMsc(code.clone()),
            },
            _ => return None,
        })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicatePaper(id) => write!(f, "paper {id}"),
            Violation::DuplicateTheorem(key) | Violation::OrphanTheorem(key) => {
                write!(f, "theorem {key}")
            }
            Violation::MalformedDate { paper_id, date } => write!(f, "paper {paper_id}: {date}"),
            Violation::MalformedMsc { paper_id, code } => {
                write!(f, "paper {paper_id}: {code:?}")
            }
            Violation::DanglingTheoremCitation(c) => write!(f, "{} -> {}", c.src, c.dst),
            Violation::DanglingPaperCitation(c) => write!(f, "{} -> {}", c.src, c.dst),
            Violation::SelfCitation { level, entity } => write!(f, "{level} {entity}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_fatal(&self) -> bool {
        self.violations.iter().any(Violation::is_fatal)
    }

    pub fn first_fatal(&self) -> Option<BuildError> {
        self.violations.iter().find_map(Violation::to_build_error)
    }

    pub fn dangling_edges(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| {
                matches!(
                    v,
                    Violation::DanglingTheoremCitation(_) | Violation::DanglingPaperCitation(_)
                )
            })
            .count()
    }
}

/// Audits a corpus: duplicate ids, malformed codes and dates, theorems of
/// unknown papers, citations with unresolved endpoints, and self-citations.
pub fn validate_records(records: &GraphRecords) -> ValidationReport {
    let mut violations = Vec::new();

    let mut paper_ids = HashSet::new();
    for paper in &records.papers {
        if !paper_ids.insert(paper.paper_id.as_str()) {
            violations.push(Violation::DuplicatePaper(paper.paper_id.clone()));
        }
        if check_msc_code(&paper.msc_primary).is_err() {
            violations.push(Violation::MalformedMsc {
                paper_id: paper.paper_id.clone(),
                code: paper.msc_primary.clone(),
            });
        }
        if !paper.first_version_date.is_valid() {
            violations.push(Violation::MalformedDate {
                paper_id: paper.paper_id.clone(),
                date: paper.first_version_date,
            });
        }
    }

    let mut theorem_keys = HashSet::new();
    for theorem in &records.theorems {
        if !theorem_keys.insert(theorem) {
            violations.push(Violation::DuplicateTheorem(theorem.clone()));
        }
        if !paper_ids.contains(theorem.paper_id.as_str()) {
            violations.push(Violation::OrphanTheorem(theorem.clone()));
        }
    }

    for citation in &records.theorem_citations {
        if !theorem_keys.contains(&citation.src) || !theorem_keys.contains(&citation.dst) {
            violations.push(Violation::DanglingTheoremCitation(citation.clone()));
        } else if citation.src == citation.dst {
            violations.push(Violation::SelfCitation {
                level: CitationLevel::Theorem,
                entity: citation.src.to_string(),
            });
        }
    }

    for citation in &records.paper_citations {
        if !paper_ids.contains(citation.src.as_str()) || !paper_ids.contains(citation.dst.as_str())
        {
            violations.push(Violation::DanglingPaperCitation(citation.clone()));
        } else if citation.src == citation.dst {
            violations.push(Violation::SelfCitation {
                level: CitationLevel::Paper,
                entity: citation.src.clone(),
            });
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper(id: &str) -> PaperRecord {
        PaperRecord {
            paper_id: id.to_string(),
            msc_primary: "20".to_string(),
            author_ids: ["a1".to_string()].into(),
            first_version_date: YearMonth::new(1998, 7).unwrap(),
        }
    }

    #[test]
    fn year_month_parse() {
        assert_eq!(
            "1998-07".parse::<YearMonth>().unwrap(),
            YearMonth {
                year: 1998,
                month: 7
            }
        );
        for bad in [
            "1998-13", "1998-00", "98-07", "1998-7", "1998/07", "abcd-01", "+998-01",
        ] {
            assert!(bad.parse::<YearMonth>().is_err(), "{bad}");
        }
        assert!(
            YearMonth {
                year: 2000,
                month: 12
            } < YearMonth {
                year: 2001,
                month: 1
            }
        );
    }

    #[test]
    fn empty_corpus_is_clean() {
        assert!(validate_records(&GraphRecords::default()).is_clean());
    }

    #[test]
    fn dangling_theorem_citation_reported() {
        let records = GraphRecords {
            papers: vec![paper("p1")],
            theorems: vec![TheoremKey::new("p1", "lemma 1")],
            theorem_citations: vec![Citation::new(
                TheoremKey::new("p1", "lemma 1"),
                TheoremKey::new("p1", "lemma 2"),
            )],
            paper_citations: vec![],
        };
        let report = validate_records(&records);
        assert_eq!(report.dangling_edges(), 1);
        assert!(!report.has_fatal());
    }

    #[test]
    fn duplicate_paper_is_fatal() {
        let records = GraphRecords {
            papers: vec![paper("p1"), paper("p1")],
            ..Default::default()
        };
        let report = validate_records(&records);
        assert_eq!(
            report.violations,
            vec![Violation::DuplicatePaper("p1".into())]
        );
        assert_eq!(
            report.first_fatal(),
            Some(BuildError::DuplicatePaper("p1".into()))
        );
    }

    #[test]
    fn self_citation_and_bad_fields() {
        let mut bad = paper("p2");
        bad.msc_primary = "2".into();
        bad.first_version_date = YearMonth {
            year: 2001,
            month: 14,
        };
        let records = GraphRecords {
            papers: vec![paper("p1"), bad],
            theorems: vec![TheoremKey::new("p3", "t")],
            theorem_citations: vec![],
            paper_citations: vec![Citation::new("p1".into(), "p1".into())],
        };
        let kinds: Vec<_> = validate_records(&records)
            .violations
            .iter()
            .map(Violation::kind)
            .collect();
        assert_eq!(
            kinds,
            [
                "malformed_msc",
                "malformed_date",
                "orphan_theorem",
                "self_citation"
            ]
        );
    }
}
