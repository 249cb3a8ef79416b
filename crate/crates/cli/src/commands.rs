use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mathrank::{
    build_graph, category_ratios, compute_scores_with, field_impact, field_series, parse_corpus,
    rank_entities, validate_records, CorpusPaths, Graph, GraphRecords, Level, NormalizedMatrices,
    Params, ParseReport, Solution, SolveOptions, ValidationReport, YearStatus,
};

use crate::tables;

#[derive(Debug, Parser)]
#[command(
    name = "mathrank",
    version,
    about = "Influence scores for theorems, papers and fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the corpus and summarize the assembled graph.
    Build {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Score the graph and write ranking tables.
    Rank {
        #[command(flatten)]
        common: CommonArgs,
        /// Rows to keep (per field with --group-by-field); all when omitted.
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        group_by_field: bool,
        /// Only write this level; all three when omitted.
        #[arg(long, value_enum)]
        level: Option<LevelArg>,
    },
    /// Field scores and cumulative field shares for each yearly snapshot.
    Series {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1995)]
        from_year: i32,
        #[arg(long, default_value_t = 2023)]
        to_year: i32,
    },
    /// Field-to-field impact matrix and pairwise asymmetry ratios.
    Impact {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LevelArg {
    Theorem,
    Paper,
    Field,
}

impl From<LevelArg> for Level {
    fn from(value: LevelArg) -> Self {
        match value {
            LevelArg::Theorem => Level::Theorem,
            LevelArg::Paper => Level::Paper,
            LevelArg::Field => Level::Field,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Paper records, one JSON object per line.
    #[arg(long)]
    pub papers: PathBuf,
    /// Theorem records, one JSON object per line.
    #[arg(long)]
    pub theorems: PathBuf,
    /// Theorem-to-theorem citations, one JSON object per line.
    #[arg(long)]
    pub thm_cites: PathBuf,
    /// Paper-to-paper citations, one JSON object per line.
    #[arg(long)]
    pub paper_cites: PathBuf,
    /// Created if missing; existing tables are overwritten.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Weight of theorem citations against the parent paper's share.
    #[arg(long, default_value_t = 0.6)]
    pub alpha_t: f64,
    /// Weight of paper citations.
    #[arg(long, default_value_t = 0.6)]
    pub alpha_p: f64,
    /// Weight of the parent field's share; 1 - alpha_p - beta_p goes to the best theorem.
    #[arg(long, default_value_t = 0.05)]
    pub beta_p: f64,
    /// Weight of field citations against above-average papers.
    #[arg(long, default_value_t = 0.85)]
    pub alpha_f: f64,
    /// Stop when the largest per-level l1 change falls below this.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl CommonArgs {
    pub fn hyperparameters(&self) -> Result<Params> {
        let hp = Params {
            alpha_t: self.alpha_t,
            alpha_p: self.alpha_p,
            beta_p: self.beta_p,
            alpha_f: self.alpha_f,
            tolerance: self.tol,
            max_iterations: self.max_iter,
        };
        hp.validate()?;
        Ok(hp)
    }

    fn corpus_paths(&self) -> CorpusPaths {
        CorpusPaths {
            papers: self.papers.clone(),
            theorems: self.theorems.clone(),
            theorem_citations: self.thm_cites.clone(),
            paper_citations: self.paper_cites.clone(),
        }
    }
}

/// Result of a command that ran to completion. `problems` lists the
/// reasons for a nonzero exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub problems: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.problems.is_empty() {
            0
        } else {
            2
        }
    }
}

struct Loaded {
    records: GraphRecords,
    validation: ValidationReport,
}

fn load(common: &CommonArgs, outcome: &mut Outcome) -> Result<Loaded> {
    fs::create_dir_all(&common.out_dir)
        .with_context(|| format!("cannot create {}", common.out_dir.display()))?;
    let (records, parse): (GraphRecords, ParseReport) = parse_corpus(&common.corpus_paths())?;
    let validation = validate_records(&records);
    tables::write_validation(&common.out_dir.join("validation.csv"), &parse, &validation)?;
    if !parse.is_clean() {
        outcome.problems.push(format!(
            "{} malformed input lines skipped",
            parse.malformed.len()
        ));
    }
    if !validation.is_clean() {
        outcome.problems.push(format!(
            "{} validation violations (see validation.csv)",
            validation.violations.len()
        ));
    }
    Ok(Loaded {
        records,
        validation,
    })
}

fn assemble(loaded: &Loaded) -> Result<Graph> {
    if let Some(err) = loaded.validation.first_fatal() {
        bail!("corpus cannot be assembled: {err}");
    }
    Ok(build_graph(&loaded.records)?)
}

fn solve(
    graph: &Graph,
    hp: &Params,
    out_dir: &Path,
    outcome: &mut Outcome,
) -> Result<Solution<f64>> {
    let solution = compute_scores_with(graph, hp, &SolveOptions::default())?;
    tables::write_solve(&out_dir.join("solve.csv"), &solution, hp)?;
    if !solution.report.converged {
        outcome.problems.push(format!(
            "no convergence after {} iterations (residual {:e})",
            solution.report.iterations, solution.report.residual
        ));
    }
    Ok(solution)
}

fn empty_levels(graph: &Graph) -> Vec<Level> {
    [
        (Level::Theorem, graph.theorem_count()),
        (Level::Paper, graph.paper_count()),
        (Level::Field, graph.field_count()),
    ]
    .into_iter()
    .filter(|&(_, n)| n == 0)
    .map(|(level, _)| level)
    .collect()
}

pub fn cmd_build(common: &CommonArgs) -> Result<Outcome> {
    common.hyperparameters()?;
    let mut outcome = Outcome::default();
    let loaded = load(common, &mut outcome)?;
    if let Some(err) = loaded.validation.first_fatal() {
        outcome
            .problems
            .push(format!("corpus cannot be assembled: {err}"));
        return Ok(outcome);
    }
    let graph = assemble(&loaded)?;
    tables::write_summary(&common.out_dir.join("summary.csv"), &graph)?;
    for level in empty_levels(&graph) {
        outcome.problems.push(format!("empty level: {level}"));
    }
    Ok(outcome)
}

pub fn cmd_rank(
    common: &CommonArgs,
    top_k: Option<usize>,
    group_by_field: bool,
    level: Option<Level>,
) -> Result<Outcome> {
    let hp = common.hyperparameters()?;
    if top_k == Some(0) {
        bail!("--top-k must be at least 1");
    }
    let mut outcome = Outcome::default();
    let loaded = load(common, &mut outcome)?;
    let graph = assemble(&loaded)?;
    let solution = solve(&graph, &hp, &common.out_dir, &mut outcome)?;
    let levels = level.map_or_else(|| Level::ALL.to_vec(), |l| vec![l]);
    for level in levels {
        let table = rank_entities(&graph, &solution.state, level, top_k, group_by_field)?;
        let path = common.out_dir.join(format!("ranking_{level}.csv"));
        tables::write_ranking(&path, &table)?;
    }
    Ok(outcome)
}

pub fn cmd_series(common: &CommonArgs, from_year: i32, to_year: i32) -> Result<Outcome> {
    let hp = common.hyperparameters()?;
    if from_year > to_year {
        bail!("--from-year {from_year} is after --to-year {to_year}");
    }
    let mut outcome = Outcome::default();
    let loaded = load(common, &mut outcome)?;
    if let Some(err) = loaded.validation.first_fatal() {
        bail!("corpus cannot be assembled: {err}");
    }
    let series = field_series(&loaded.records, from_year..=to_year, &hp)?;
    tables::write_field_series(&common.out_dir.join("field_scores.csv"), &series)?;
    let ratios = category_ratios(&loaded.records, from_year..=to_year)?;
    tables::write_ratios(&common.out_dir.join("category_ratios.csv"), &ratios)?;
    for year in &series.years {
        match &year.status {
            YearStatus::NotConverged => outcome.problems.push(format!(
                "{}: no convergence after {} iterations",
                year.year, year.iterations
            )),
            YearStatus::Absent(reason) => log::info!("{} absent: {reason}", year.year),
            YearStatus::Converged => {}
        }
    }
    Ok(outcome)
}

pub fn cmd_impact(common: &CommonArgs) -> Result<Outcome> {
    let hp = common.hyperparameters()?;
    let mut outcome = Outcome::default();
    let loaded = load(common, &mut outcome)?;
    let graph = assemble(&loaded)?;
    let solution = solve(&graph, &hp, &common.out_dir, &mut outcome)?;
    let norm = NormalizedMatrices::new(&graph);
    let impact = field_impact(&graph, &norm, &solution.state.paper);
    tables::write_impact(&common.out_dir.join("impact_matrix.csv"), &impact)?;
    tables::write_asymmetry(&common.out_dir.join("asymmetry.csv"), &impact)?;
    Ok(outcome)
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Build { common } => cmd_build(common),
        Command::Rank {
            common,
            top_k,
            group_by_field,
            level,
        } => cmd_rank(common, *top_k, *group_by_field, level.map(Into::into)),
        Command::Series {
            common,
            from_year,
            to_year,
        } => cmd_series(common, *from_year, *to_year),
        Command::Impact { common } => cmd_impact(common),
    }
}

/// Runs a parsed command, inside a dedicated thread pool when `--workers`
/// is given.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let common = match &cli.command {
        Command::Build { common }
        | Command::Rank { common, .. }
        | Command::Series { common, .. }
        | Command::Impact { common } => common,
    };
    match common.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .context("cannot start worker pool")?;
            pool.install(|| dispatch(&cli.command))
        }
        None => dispatch(&cli.command),
    }
}
