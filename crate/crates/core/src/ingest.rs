//! Line-delimited JSON corpus files and yearly snapshot filtering.
//!
//! Four files, one JSON object per line, UTF-8:
//!
//! | file             | fields                                                    |
//! |------------------|-----------------------------------------------------------|
//! | papers           | `paper_id`, `msc_primary`, `author_ids`, `first_version_date` (`"YYYY-MM"`) |
//! | theorems         | `paper_id`, `theorem_id`                                  |
//! | theorem citations| `src_paper`, `src_theorem`, `dst_paper`, `dst_theorem`    |
//! | paper citations  | `src_paper`, `dst_paper`                                  |
//!
//! Unknown fields are ignored and blank lines skipped. Lines that fail to
//! parse are collected in a [`ParseReport`] instead of aborting.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::IngestError;
use crate::records::{
    Citation, GraphRecords, PaperCitation, PaperRecord, TheoremCitation, TheoremKey, YearMonth,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub papers: PathBuf,
    pub theorems: PathBuf,
    pub theorem_citations: PathBuf,
    pub paper_citations: PathBuf,
}

impl CorpusPaths {
    /// Conventional file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        CorpusPaths {
            papers: dir.join("papers.jsonl"),
            theorems: dir.join("theorems.jsonl"),
            theorem_citations: dir.join("theorem_citations.jsonl"),
            paper_citations: dir.join("paper_citations.jsonl"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFile {
    Papers,
    Theorems,
    TheoremCitations,
    PaperCitations,
}

impl fmt::Display for CorpusFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFile::Papers => "papers",
            CorpusFile::Theorems => "theorems",
            CorpusFile::TheoremCitations => "theorem-citations",
            CorpusFile::PaperCitations => "paper-citations",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub file: CorpusFile,
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub malformed: Vec<MalformedLine>,
}

impl ParseReport {
    pub fn is_clean(&self) -> bool {
        self.malformed.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct TheoremCitationLine {
    src_paper: String,
    src_theorem: String,
    dst_paper: String,
    dst_theorem: String,
}

impl From<TheoremCitationLine> for TheoremCitation {
    fn from(line: TheoremCitationLine) -> Self {
        Citation::new(
            TheoremKey::new(line.src_paper, line.src_theorem),
            TheoremKey::new(line.dst_paper, line.dst_theorem),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PaperCitationLine {
    src_paper: String,
    dst_paper: String,
}

fn parse_lines<T: DeserializeOwned, R: BufRead>(
    reader: R,
    file: CorpusFile,
    path: &Path,
    report: &mut ParseReport,
) -> Result<Vec<T>, IngestError> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IngestError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<T>(&line) {
            Ok(record) => out.push(record),
            Err(err) => report.malformed.push(MalformedLine {
                file,
                line: n + 1,
                message: err.to_string(),
            }),
        }
    }
    Ok(out)
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IngestError::Read {
            path: path.to_path_buf(),
            source,
        })
}

/// Reads the four corpus files.
pub fn parse_corpus(paths: &CorpusPaths) -> Result<(GraphRecords, ParseReport), IngestError> {
    let mut report = ParseReport::default();
    let papers: Vec<PaperRecord> = parse_lines(
        open(&paths.papers)?,
        CorpusFile::Papers,
        &paths.papers,
        &mut report,
    )?;
    let theorems: Vec<TheoremKey> = parse_lines(
        open(&paths.theorems)?,
        CorpusFile::Theorems,
        &paths.theorems,
        &mut report,
    )?;
    let theorem_citations: Vec<TheoremCitationLine> = parse_lines(
        open(&paths.theorem_citations)?,
        CorpusFile::TheoremCitations,
        &paths.theorem_citations,
        &mut report,
    )?;
    let paper_citations: Vec<PaperCitationLine> = parse_lines(
        open(&paths.paper_citations)?,
        CorpusFile::PaperCitations,
        &paths.paper_citations,
        &mut report,
    )?;
    let records = GraphRecords {
        papers,
        theorems,
        theorem_citations: theorem_citations.into_iter().map(Into::into).collect(),
        paper_citations: paper_citations
            .into_iter()
            .map(|l| Citation::new(l.src_paper, l.dst_paper))
            .collect(),
    };
    Ok((records, report))
}

fn write_lines<T: Serialize>(
    path: &Path,
    items: impl IntoIterator<Item = T>,
) -> Result<(), IngestError> {
    let wrap = |source| IngestError::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    for item in items {
        let line = serde_json::to_string(&item).expect("corpus records serialize");
        writeln!(out, "{line}").map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

/// Writes records in the same format [`parse_corpus`] reads.
pub fn emit_corpus(records: &GraphRecords, paths: &CorpusPaths) -> Result<(), IngestError> {
    write_lines(&paths.papers, &records.papers)?;
    write_lines(&paths.theorems, &records.theorems)?;
    write_lines(
        &paths.theorem_citations,
        records
            .theorem_citations
            .iter()
            .map(|c| TheoremCitationLine {
                src_paper: c.src.paper_id.clone(),
                src_theorem: c.src.theorem_id.clone(),
                dst_paper: c.dst.paper_id.clone(),
                dst_theorem: c.dst.theorem_id.clone(),
            }),
    )?;
    write_lines(
        &paths.paper_citations,
        records
            .paper_citations
            .iter()
            .map(|c: &PaperCitation| PaperCitationLine {
                src_paper: c.src.clone(),
                dst_paper: c.dst.clone(),
            }),
    )
}

/// Restricts the corpus to papers whose first version is dated no later
/// than December of `year`.
///
/// Theorems survive with their paper; citations survive only if both
/// endpoints do, so the result never contains a dangling edge.
pub fn snapshot_filter(records: &GraphRecords, year: i32) -> GraphRecords {
    let cutoff = YearMonth::end_of_year(year);
    let papers: Vec<PaperRecord> = records
        .papers
        .iter()
        .filter(|p| p.first_version_date <= cutoff)
        .cloned()
        .collect();
    let paper_ids: HashSet<&str> = papers.iter().map(|p| p.paper_id.as_str()).collect();

    let theorems: Vec<TheoremKey> = records
        .theorems
        .iter()
        .filter(|t| paper_ids.contains(t.paper_id.as_str()))
        .cloned()
        .collect();
    let theorem_ids: HashSet<&TheoremKey> = theorems.iter().collect();

    let theorem_citations = records
        .theorem_citations
        .iter()
        .filter(|c| theorem_ids.contains(&c.src) && theorem_ids.contains(&c.dst))
        .cloned()
        .collect();
    let paper_citations = records
        .paper_citations
        .iter()
        .filter(|c| paper_ids.contains(c.src.as_str()) && paper_ids.contains(c.dst.as_str()))
        .cloned()
        .collect();

    GraphRecords {
        papers,
        theorems,
        theorem_citations,
        paper_citations,
    }
}
