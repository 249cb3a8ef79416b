use std::collections::BTreeMap;

use mathrank::{Citation, GraphRecords, PaperRecord, TheoremKey, YearMonth};
use rand::seq::SliceRandom;
use rand::Rng;

/// One representative code per field, in canonical field order.
pub const FIELD_CODES: [&str; 13] = [
    "20", "14", "53", "57", "42", "35", "37", "81", "60", "90", "65", "62", "05",
];

#[derive(Debug, Clone, Copy)]
pub struct CorpusShape {
    pub max_theorems: usize,
    pub max_papers: usize,
    pub max_fields: usize,
    pub years: (i32, i32),
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape {
            max_theorems: 200,
            max_papers: 50,
            max_fields: 13,
            years: (1991, 2023),
        }
    }
}

/// A random corpus within `shape`. Authors come from a small pool so that
/// shared-author and same-paper citations all occur. Every paper has at
/// least one theorem unless `shape.max_theorems` is smaller than the paper
/// count, and at least one paper citation exists.
pub fn random_corpus<R: Rng>(rng: &mut R, shape: CorpusShape) -> GraphRecords {
    let n_papers = rng.gen_range(2..=shape.max_papers.max(2));
    let n_fields = rng.gen_range(1..=shape.max_fields.clamp(1, 13));
    let mut field_pool: Vec<usize> = (0..13).collect();
    field_pool.shuffle(rng);
    let fields = &field_pool[..n_fields];

    let author_pool = (n_papers / 2).max(2);
    let papers: Vec<PaperRecord> = (0..n_papers)
        .map(|i| {
            let n_authors = rng.gen_range(1..=3);
            PaperRecord {
                paper_id: format!("{:04}.{:05}", rng.gen_range(0..100), i),
                msc_primary: FIELD_CODES[fields[rng.gen_range(0..n_fields)]].to_string(),
                author_ids: (0..n_authors)
                    .map(|_| format!("a{}", rng.gen_range(0..author_pool)))
                    .collect(),
                first_version_date: YearMonth::new(
                    rng.gen_range(shape.years.0..=shape.years.1),
                    rng.gen_range(1..=12),
                )
                .unwrap(),
            }
        })
        .collect();

    let budget = shape.max_theorems.max(1);
    let per_paper = (budget / n_papers).max(1);
    let mut theorems = Vec::new();
    for paper in &papers {
        let k = rng.gen_range(1..=per_paper);
        for j in 0..k {
            if theorems.len() >= budget {
                break;
            }
            let kind = ["lemma", "theorem", "proposition", "corollary"][rng.gen_range(0..4)];
            theorems.push(TheoremKey::new(
                paper.paper_id.clone(),
                format!("{kind} {}.{j}", j % 5),
            ));
        }
    }

    let mut by_paper: BTreeMap<&str, Vec<&TheoremKey>> = BTreeMap::new();
    for t in &theorems {
        by_paper.entry(t.paper_id.as_str()).or_default().push(t);
    }

    let mut theorem_citations = Vec::new();
    let n_tc = rng.gen_range(0..=2 * theorems.len());
    for _ in 0..n_tc {
        let src = theorems[rng.gen_range(0..theorems.len())].clone();
        let dst = if rng.gen_bool(0.3) {
            let same = &by_paper[src.paper_id.as_str()];
            (*same[rng.gen_range(0..same.len())]).clone()
        } else {
            theorems[rng.gen_range(0..theorems.len())].clone()
        };
        theorem_citations.push(Citation::new(src, dst));
    }

    let mut paper_citations = Vec::new();
    let n_pc = rng.gen_range(1..=3 * n_papers);
    for _ in 0..n_pc {
        let src = rng.gen_range(0..n_papers);
        let mut dst = rng.gen_range(0..n_papers);
        if dst == src {
            dst = (dst + 1) % n_papers;
        }
        paper_citations.push(Citation::new(
            papers[src].paper_id.clone(),
            papers[dst].paper_id.clone(),
        ));
    }

    GraphRecords {
        papers,
        theorems,
        theorem_citations,
        paper_citations,
    }
}

/// Same records in a random order.
pub fn shuffled<R: Rng>(records: &GraphRecords, rng: &mut R) -> GraphRecords {
    let mut out = records.clone();
    out.papers.shuffle(rng);
    out.theorems.shuffle(rng);
    out.theorem_citations.shuffle(rng);
    out.paper_citations.shuffle(rng);
    out
}

/// Renames every paper id through `rename`, which must be injective.
pub fn relabel_papers(records: &GraphRecords, rename: impl Fn(&str) -> String) -> GraphRecords {
    let key = |t: &TheoremKey| TheoremKey::new(rename(&t.paper_id), t.theorem_id.clone());
    GraphRecords {
        papers: records
            .papers
            .iter()
            .map(|p| PaperRecord {
                paper_id: rename(&p.paper_id),
                ..p.clone()
            })
            .collect(),
        theorems: records.theorems.iter().map(key).collect(),
        theorem_citations: records
            .theorem_citations
            .iter()
            .map(|c| Citation::new(key(&c.src), key(&c.dst)))
            .collect(),
        paper_citations: records
            .paper_citations
            .iter()
            .map(|c| Citation::new(rename(&c.src), rename(&c.dst)))
            .collect(),
    }
}
