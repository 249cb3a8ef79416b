//! Comma-delimited output tables: one header line, LF endings, scores with
//! 12 significant digits.

use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context, Result};
use csv::{Terminator, Writer, WriterBuilder};
use mathrank::analysis::RatioRow;
use mathrank::ingest::ParseReport;
use mathrank::{
    EntityKey, FieldId, FieldSeries, Graph, Impact, Level, Ranking, Solution, ValidationReport,
    YearStatus, FIELD_COUNT,
};

pub fn format_score(x: f64) -> String {
    format!("{x:.11e}")
}

fn writer(path: &Path) -> Result<Writer<File>> {
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))
}

fn field_header(first: &[&str]) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain(FieldId::ALL.iter().map(|f| f.name().to_string()))
        .collect()
}

pub fn write_validation(path: &Path, parse: &ParseReport, report: &ValidationReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["kind", "detail"])?;
    for line in &parse.malformed {
        w.write_record([
            "malformed_line".to_string(),
            format!("{}:{}: {}", line.file, line.line, line.message),
        ])?;
    }
    for violation in &report.violations {
        w.write_record([violation.kind().to_string(), violation.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, graph: &Graph) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["item", "value"])?;
    let mut row = |item: String, value: usize| w.write_record([item, value.to_string()]);
    row("papers".into(), graph.paper_count())?;
    row("theorems".into(), graph.theorem_count())?;
    row("fields".into(), graph.field_count())?;
    row("theorem_edges".into(), graph.theorem_matrix().nnz())?;
    row("paper_edges".into(), graph.paper_matrix().nnz())?;
    row("field_edges".into(), graph.field_matrix().nnz())?;
    for field in FieldId::ALL {
        let count = graph
            .field_index(field)
            .map_or(0, |f| graph.field_papers()[f].len());
        row(format!("papers:{field}"), count)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_solve(path: &Path, solution: &Solution<f64>, hp: &mathrank::Params) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["key", "value"])?;
    for (key, value) in [
        ("alpha_t", hp.alpha_t.to_string()),
        ("alpha_p", hp.alpha_p.to_string()),
        ("beta_p", hp.beta_p.to_string()),
        ("alpha_f", hp.alpha_f.to_string()),
        ("tolerance", hp.tolerance.to_string()),
        ("max_iterations", hp.max_iterations.to_string()),
        ("iterations", solution.report.iterations.to_string()),
        ("residual", format_score(solution.report.residual)),
        ("converged", solution.report.converged.to_string()),
    ] {
        w.write_record([key, value.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ranking(path: &Path, table: &Ranking) -> Result<()> {
    let mut w = writer(path)?;
    match table.level {
        Level::Theorem => w.write_record(["rank", "id", "theorem_id", "field", "score"])?,
        Level::Paper | Level::Field => w.write_record(["rank", "id", "field", "score"])?,
    }
    for row in &table.rows {
        let rank = row.rank.to_string();
        let field = row.field.name();
        let score = format_score(row.score);
        match &row.entity {
            EntityKey::Theorem(key) => {
                w.write_record([rank.as_str(), &key.paper_id, &key.theorem_id, field, &score])?
            }
            EntityKey::Paper(id) => w.write_record([rank.as_str(), id, field, &score])?,
            EntityKey::Field(f) => w.write_record([rank.as_str(), f.name(), field, &score])?,
        }
    }
    w.flush()?;
    Ok(())
}

fn status_name(status: &YearStatus) -> &'static str {
    match status {
        YearStatus::Converged => "converged",
        YearStatus::NotConverged => "not_converged",
        YearStatus::Absent(_) => "absent",
    }
}

pub fn write_field_series(path: &Path, series: &FieldSeries<f64>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(field_header(&["year", "status"]))?;
    for year in &series.years {
        let mut record = vec![year.year.to_string(), status_name(&year.status).to_string()];
        record.extend(
            year.scores
                .iter()
                .map(|s| s.map(format_score).unwrap_or_default()),
        );
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ratios(path: &Path, rows: &[RatioRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(field_header(&["year", "status"]))?;
    for row in rows {
        let mut record = vec![row.year.to_string()];
        match &row.ratios {
            Some(ratios) => {
                record.push("populated".into());
                record.extend(ratios.iter().map(|&r| format_score(r)));
            }
            None => {
                record.push("absent".into());
                record.extend(std::iter::repeat_n(String::new(), FIELD_COUNT));
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_impact(path: &Path, impact: &Impact) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(field_header(&["source"]))?;
    for (source, row) in FieldId::ALL.iter().zip(impact.rows()) {
        let mut record = vec![source.name().to_string()];
        record.extend(row.iter().map(|&v| format_score(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_asymmetry(path: &Path, impact: &Impact) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["source", "target", "ratio"])?;
    for a in impact.asymmetries() {
        let ratio = a
            .ratio
            .map(format_score)
            .unwrap_or_else(|| "undefined".into());
        w.write_record([a.source.name(), a.target.name(), &ratio])?;
    }
    w.flush()?;
    Ok(())
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads a table written by [`write_impact`].
pub fn read_impact(path: &Path) -> Result<Impact> {
    let mut rows = [[0.0; FIELD_COUNT]; FIELD_COUNT];
    let mut seen = 0;
    for (i, record) in reader(path)?.records().enumerate() {
        let record = record?;
        if i >= FIELD_COUNT || record.len() != FIELD_COUNT + 1 {
            bail!("{}: unexpected shape at data row {}", path.display(), i + 1);
        }
        for (j, cell) in record.iter().skip(1).enumerate() {
            rows[i][j] = cell.parse()?;
        }
        seen += 1;
    }
    if seen != FIELD_COUNT {
        bail!(
            "{}: expected {FIELD_COUNT} rows, found {seen}",
            path.display()
        );
    }
    Ok(Impact::from_rows(rows))
}

/// Reads a ranking file's `(id, score)` columns, ignoring the theorem label.
pub fn read_ranking_scores(path: &Path) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for record in reader(path)?.records() {
        let record = record?;
        let score = record.get(record.len() - 1).unwrap_or_default().parse()?;
        out.push((record.get(1).unwrap_or_default().to_string(), score));
    }
    Ok(out)
}

/// Year, status and one optional score per field.
pub type SeriesRow = (i32, String, Vec<Option<f64>>);

/// Reads the per-year field scores written by [`write_field_series`];
/// empty cells come back as `None`.
pub fn read_field_series(path: &Path) -> Result<Vec<SeriesRow>> {
    let mut out = Vec::new();
    for record in reader(path)?.records() {
        let record = record?;
        let year = record.get(0).unwrap_or_default().parse()?;
        let status = record.get(1).unwrap_or_default().to_string();
        let scores = record
            .iter()
            .skip(2)
            .map(|cell| {
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse().map(Some)
                }
            })
            .collect::<Result<_, _>>()?;
        out.push((year, status, scores));
    }
    Ok(out)
}
