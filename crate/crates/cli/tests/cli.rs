use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mathrank::{
    emit_corpus, Citation, CorpusPaths, GraphRecords, PaperRecord, TheoremKey, YearMonth,
};
use mathrank_cli::tables::{read_field_series, read_impact, read_ranking_scores};
use mathrank_testkit::DenseModel;

fn paper(id: &str, msc: &str, author: &str, year: i32) -> PaperRecord {
    PaperRecord {
        paper_id: id.into(),
        msc_primary: msc.into(),
        author_ids: [author.to_string()].into(),
        first_version_date: YearMonth::new(year, 4).unwrap(),
    }
}

fn write_corpus(dir: &Path, records: &GraphRecords) -> CorpusPaths {
    let paths = CorpusPaths::in_dir(dir);
    emit_corpus(records, &paths).unwrap();
    paths
}

fn mathrank(sub: &str, paths: &CorpusPaths, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mathrank"))
        .arg(sub)
        .arg("--papers")
        .arg(&paths.papers)
        .arg("--theorems")
        .arg(&paths.theorems)
        .arg("--thm-cites")
        .arg(&paths.theorem_citations)
        .arg("--paper-cites")
        .arg(&paths.paper_citations)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn read(path: PathBuf) -> String {
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn singleton() -> GraphRecords {
    GraphRecords {
        papers: vec![paper("math/9807071", "20", "a1", 1998)],
        theorems: vec![TheoremKey::new("math/9807071", "lemma 8.1")],
        ..Default::default()
    }
}

/// Two fields, a handful of papers and theorems, citations both ways.
fn small_corpus() -> GraphRecords {
    let papers = vec![
        paper("p1", "14", "a", 1996),
        paper("p2", "14", "b", 1999),
        paper("p3", "35", "c", 2001),
        paper("p4", "35", "a", 2003),
        paper("p5", "60", "d", 2003),
    ];
    let theorems = papers
        .iter()
        .flat_map(|p| {
            [
                TheoremKey::new(p.paper_id.clone(), "lemma 1"),
                TheoremKey::new(p.paper_id.clone(), "theorem 2"),
            ]
        })
        .collect();
    let tc = |a: &str, b: &str| {
        Citation::new(
            TheoremKey::new(a, "theorem 2"),
            TheoremKey::new(b, "lemma 1"),
        )
    };
    let pc = |a: &str, b: &str| Citation::new(a.to_string(), b.to_string());
    GraphRecords {
        papers,
        theorems,
        theorem_citations: vec![
            tc("p2", "p1"),
            tc("p3", "p1"),
            tc("p4", "p3"),
            tc("p5", "p4"),
        ],
        paper_citations: vec![
            pc("p2", "p1"),
            pc("p3", "p1"),
            pc("p4", "p3"),
            pc("p5", "p4"),
            pc("p4", "p2"),
        ],
    }
}

#[test]
fn build_summarizes_two_papers() {
    let dir = tempfile::tempdir().unwrap();
    let records = GraphRecords {
        papers: vec![paper("a", "20", "x", 2000), paper("b", "62", "y", 2001)],
        theorems: vec![TheoremKey::new("a", "t"), TheoremKey::new("b", "t")],
        paper_citations: vec![Citation::new("b".into(), "a".into())],
        ..Default::default()
    };
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    let result = mathrank("build", &paths, &out, &[]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let summary = read(out.join("summary.csv"));
    assert!(summary.starts_with("item,value\npapers,2\ntheorems,2\nfields,2\n"));
    assert!(summary.contains("papers:Algebra,1\n"));
    assert!(summary.contains("papers:Statistics,1\n"));
    assert!(summary.contains("papers:PDE,0\n"));
    assert_eq!(read(out.join("validation.csv")), "kind,detail\n");
}

#[test]
fn build_flags_dangling_edge() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = singleton();
    records
        .paper_citations
        .push(Citation::new("math/9807071".into(), "ghost/0001".into()));
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    let result = mathrank("build", &paths, &out, &[]);
    assert_eq!(result.status.code(), Some(2));
    let report = read(out.join("validation.csv"));
    assert!(
        report.contains("dangling_paper_citation,math/9807071 -> ghost/0001"),
        "{report}"
    );
}

#[test]
fn build_rejects_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &GraphRecords::default());
    let result = mathrank("build", &paths, &dir.path().join("out"), &[]);
    assert!(!result.status.success());
    assert!(String::from_utf8_lossy(&result.stderr).contains("empty level"));
}

#[test]
fn malformed_line_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &singleton());
    let mut text = read(paths.papers.clone());
    text.push_str("{\"paper_id\": 7}\n");
    fs::write(&paths.papers, text).unwrap();
    let out = dir.path().join("out");
    let result = mathrank("build", &paths, &out, &[]);
    assert_eq!(result.status.code(), Some(2));
    assert!(read(out.join("validation.csv")).contains("malformed_line,\"papers:2:"));
}

#[test]
fn rank_singleton_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &singleton());
    let out = dir.path().join("out");
    let result = mathrank("rank", &paths, &out, &[]);
    assert!(result.status.success());
    assert_eq!(
        read(out.join("ranking_theorem.csv")),
        "rank,id,theorem_id,field,score\n1,math/9807071,lemma 8.1,Algebra,1.00000000000e0\n"
    );
    assert_eq!(
        read(out.join("ranking_paper.csv")),
        "rank,id,field,score\n1,math/9807071,Algebra,1.00000000000e0\n"
    );
    assert_eq!(
        read(out.join("ranking_field.csv")),
        "rank,id,field,score\n1,Algebra,Algebra,1.00000000000e0\n"
    );
}

#[test]
fn rank_defaults_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &small_corpus());
    let out = dir.path().join("out");
    assert!(mathrank("rank", &paths, &out, &["--level", "paper"])
        .status
        .success());
    let solve = read(out.join("solve.csv"));
    for line in [
        "alpha_t,0.6",
        "alpha_p,0.6",
        "beta_p,0.05",
        "alpha_f,0.85",
        "tolerance,0.000000001",
        "converged,true",
    ] {
        assert!(solve.contains(line), "{line} missing from {solve}");
    }
    assert!(!out.join("ranking_theorem.csv").exists());
    let scores = read_ranking_scores(&out.join("ranking_paper.csv")).unwrap();
    assert_eq!(scores.len(), 5);
    assert!(scores.windows(2).all(|w| w[0].1 >= w[1].1));
}

#[test]
fn rank_grouped_top_k() {
    let dir = tempfile::tempdir().unwrap();
    let papers: Vec<PaperRecord> = (0..12)
        .map(|i| paper(&format!("alg.{i:02}"), "20", &format!("a{i}"), 2000))
        .chain((0..12).map(|i| paper(&format!("pde.{i:02}"), "35", &format!("b{i}"), 2000)))
        .chain((0..3).map(|i| paper(&format!("num.{i:02}"), "65", &format!("c{i}"), 2000)))
        .collect();
    let theorems = papers
        .iter()
        .map(|p| TheoremKey::new(p.paper_id.clone(), "theorem 1"))
        .collect();
    let paper_citations = papers
        .windows(2)
        .map(|w| Citation::new(w[1].paper_id.clone(), w[0].paper_id.clone()))
        .collect();
    let records = GraphRecords {
        papers,
        theorems,
        paper_citations,
        ..Default::default()
    };
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    let result = mathrank(
        "rank",
        &paths,
        &out,
        &["--top-k", "10", "--group-by-field", "--level", "paper"],
    );
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let text = read(out.join("ranking_paper.csv"));
    let count = |field: &str| {
        text.lines()
            .filter(|l| l.contains(&format!(",{field},")))
            .count()
    };
    assert_eq!(count("Algebra"), 10);
    assert_eq!(count("PDE"), 10);
    assert_eq!(count("NumericalAnalysis"), 3);
}

#[test]
fn rank_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &small_corpus());
    let out = dir.path().join("out");
    let result = mathrank("rank", &paths, &out, &["--max-iter", "2"]);
    assert_eq!(result.status.code(), Some(2));
    assert!(read(out.join("solve.csv")).contains("converged,false"));
    assert!(out.join("ranking_paper.csv").exists());
}

#[test]
fn invalid_hyperparameters_fail_before_work() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &small_corpus());
    let out = dir.path().join("out");
    let result = mathrank(
        "rank",
        &paths,
        &out,
        &["--alpha-p", "0.9", "--beta-p", "0.1"],
    );
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("alpha_p + beta_p"));
    assert!(!out.exists());
}

#[test]
fn series_covers_requested_years() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &small_corpus());
    let out = dir.path().join("out");
    let result = mathrank("series", &paths, &out, &[]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let rows = read_field_series(&out.join("field_scores.csv")).unwrap();
    assert_eq!(rows.len(), 29);
    assert_eq!(rows.first().unwrap().0, 1995);
    assert_eq!(rows.last().unwrap().0, 2023);
    assert_eq!(rows[0].1, "absent");
    for (_, status, scores) in rows.iter().filter(|r| r.1 == "converged") {
        assert_eq!(status, "converged");
        let sum: f64 = scores.iter().flatten().sum();
        // printed with 12 significant digits
        assert!((sum - 1.0).abs() <= 1e-11);
    }
    let ratios = read(out.join("category_ratios.csv"));
    assert_eq!(ratios.lines().count(), 30);
    assert!(ratios.lines().nth(1).unwrap().starts_with("1995,absent,"));
}

#[test]
fn single_year_series_matches_rank() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), &small_corpus());
    let series_out = dir.path().join("series");
    let rank_out = dir.path().join("rank");
    assert!(mathrank(
        "series",
        &paths,
        &series_out,
        &["--from-year", "2023", "--to-year", "2023"]
    )
    .status
    .success());
    assert!(mathrank("rank", &paths, &rank_out, &["--level", "field"])
        .status
        .success());
    let rows = read_field_series(&series_out.join("field_scores.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    let ranked = read_ranking_scores(&rank_out.join("ranking_field.csv")).unwrap();
    for (name, score) in ranked {
        let index = name.parse::<mathrank::FieldId>().unwrap().index();
        assert_eq!(rows[0].2[index], Some(score));
    }
}

#[test]
fn impact_of_citation_free_corpus_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let records = GraphRecords {
        papers: vec![paper("a", "53", "x", 2000), paper("b", "53", "y", 2000)],
        theorems: vec![TheoremKey::new("a", "t"), TheoremKey::new("b", "t")],
        ..Default::default()
    };
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    assert!(mathrank("impact", &paths, &out, &[]).status.success());
    let impact = read_impact(&out.join("impact_matrix.csv")).unwrap();
    assert!(impact.rows().iter().flatten().all(|&v| v == 0.0));
    assert!(read(out.join("asymmetry.csv")).contains("DiffGeom,Algebra,undefined"));
}

#[test]
fn impact_single_citation_equals_citer_score() {
    let dir = tempfile::tempdir().unwrap();
    let records = GraphRecords {
        papers: vec![
            paper("a", "20", "x", 2000),
            paper("b", "20", "y", 2000),
            paper("c", "35", "z", 2000),
        ],
        theorems: vec![
            TheoremKey::new("a", "t"),
            TheoremKey::new("b", "t"),
            TheoremKey::new("c", "t"),
        ],
        paper_citations: vec![Citation::new("c".into(), "a".into())],
        ..Default::default()
    };
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    assert!(mathrank("impact", &paths, &out, &[]).status.success());
    let impact = read_impact(&out.join("impact_matrix.csv")).unwrap();

    let model = DenseModel::from_records(&records);
    let run = model.solve((0.6, 0.6, 0.05, 0.85), 1e-9, 10_000, model.uniform());
    let citer = run.state.paper[2];
    let nonzero: Vec<f64> = impact
        .rows()
        .iter()
        .flatten()
        .copied()
        .filter(|&v| v != 0.0)
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert!(
        (impact.get(mathrank::FieldId::Algebra, mathrank::FieldId::Pde) - citer).abs() <= 1e-11
    );
}

#[test]
fn impact_file_satisfies_column_mass_identity() {
    let dir = tempfile::tempdir().unwrap();
    let records = small_corpus();
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    assert!(mathrank("impact", &paths, &out, &[]).status.success());
    assert!(mathrank("rank", &paths, &out, &["--level", "paper"])
        .status
        .success());
    let impact = read_impact(&out.join("impact_matrix.csv")).unwrap();
    let scores: std::collections::BTreeMap<String, f64> =
        read_ranking_scores(&out.join("ranking_paper.csv"))
            .unwrap()
            .into_iter()
            .collect();

    let mut mass = [0.0; 13];
    for p in &records.papers {
        let cites_any = records.paper_citations.iter().any(|c| c.src == p.paper_id);
        if cites_any {
            mass[mathrank::msc_to_field(&p.msc_primary).unwrap().index()] += scores[&p.paper_id];
        }
    }
    for field in mathrank::FieldId::ALL {
        assert!((impact.column_mass(field) - mass[field.index()]).abs() <= 1e-10);
    }
}

#[test]
fn rank_accepts_alternate_weights() {
    let dir = tempfile::tempdir().unwrap();
    let records = small_corpus();
    let paths = write_corpus(dir.path(), &records);
    let out = dir.path().join("out");
    let args = [
        "--alpha-t",
        "0.85",
        "--alpha-p",
        "0.6",
        "--beta-p",
        "0.05",
        "--alpha-f",
        "0.85",
    ];
    assert!(mathrank("rank", &paths, &out, &args).status.success());
    assert!(read(out.join("solve.csv")).contains("alpha_t,0.85\n"));

    let model = DenseModel::from_records(&records);
    let run = model.solve((0.85, 0.6, 0.05, 0.85), 1e-9, 10_000, model.uniform());
    let scores: std::collections::BTreeMap<String, f64> =
        read_ranking_scores(&out.join("ranking_paper.csv"))
            .unwrap()
            .into_iter()
            .collect();
    for (id, expected) in model.paper_ids.iter().zip(&run.state.paper) {
        assert!((scores[id] - expected).abs() <= 1e-11);
    }
}
