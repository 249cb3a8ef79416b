// Index loops are kept literal so the model reads like the update rule.
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use mathrank::GraphRecords;

/// Field index of a two-digit MSC code, written out as integer ranges.
/// Order: Algebra, AlgGeom, DiffGeom, Topology, Analysis, PDE, DynSys,
/// Physics, Probability, Optimization, NumericalAnalysis, Statistics, Others.
pub fn reference_field(code: &str) -> usize {
    let Ok(n) = code.parse::<u32>() else {
        return 12;
    };
    if code.len() != 2 {
        return 12;
    }
    match n {
        6 | 8 | 15..=18 | 20 => 0,
        11..=14 => 1,
        32 | 51..=53 | 58 => 2,
        19 | 22 | 54 | 55 | 57 => 3,
        26 | 28 | 30 | 33 | 34 | 39..=43 | 46 | 47 => 4,
        31 | 35 | 44 | 45 | 49 => 5,
        37 => 6,
        70 | 74 | 76 | 78 | 80..=83 | 85 | 86 => 7,
        60 => 8,
        90 => 9,
        65 => 10,
        62 => 11,
        _ => 12,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub theorem: Vec<f64>,
    pub paper: Vec<f64>,
    pub field: Vec<f64>,
}

impl DenseState {
    pub fn residual(&self, other: &DenseState) -> f64 {
        let l1 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>();
        l1(&self.theorem, &other.theorem)
            .max(l1(&self.paper, &other.paper))
            .max(l1(&self.field, &other.field))
    }
}

#[derive(Debug, Clone)]
pub struct DenseRun {
    pub state: DenseState,
    pub iterations: usize,
    pub converged: bool,
    /// Some level's unnormalized vector summed to zero.
    pub degenerate: bool,
}

/// Dense matrices and maps of the three-level graph.
#[derive(Debug, Clone)]
pub struct DenseModel {
    pub theorem_ids: Vec<(String, String)>,
    pub paper_ids: Vec<String>,
    /// Canonical field indices (0..13) present in the corpus, ascending.
    pub field_ids: Vec<usize>,
    /// Raw weights; `[i][j]` is the weight of `j` citing `i`.
    pub t_raw: Vec<Vec<f64>>,
    pub p_raw: Vec<Vec<f64>>,
    pub f_raw: Vec<Vec<f64>>,
    pub t_norm: Vec<Vec<f64>>,
    pub p_norm: Vec<Vec<f64>>,
    pub f_norm: Vec<Vec<f64>>,
    pub theorem_paper: Vec<usize>,
    pub paper_field: Vec<usize>,
}

fn normalize_columns(raw: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = raw.len();
    let mut out = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut sum = 0.0;
        for row in raw.iter() {
            if row[j] > 0.0 {
                sum += row[j];
            }
        }
        if sum > 0.0 {
            for i in 0..n {
                out[i][j] = raw[i][j] / sum;
            }
        }
    }
    out
}

impl DenseModel {
    /// Assumes the records have no duplicate or orphan entities; dangling
    /// citations and self-citations are skipped.
    pub fn from_records(records: &GraphRecords) -> Self {
        let papers: BTreeMap<&str, &mathrank::PaperRecord> = records
            .papers
            .iter()
            .map(|p| (p.paper_id.as_str(), p))
            .collect();
        let paper_ids: Vec<String> = papers.keys().map(|s| s.to_string()).collect();
        let paper_pos = |id: &str| paper_ids.iter().position(|p| p == id);

        let theorem_ids: Vec<(String, String)> = records
            .theorems
            .iter()
            .map(|t| (t.paper_id.clone(), t.theorem_id.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let theorem_pos =
            |paper: &str, thm: &str| theorem_ids.iter().position(|(p, t)| p == paper && t == thm);

        let canonical: Vec<usize> = paper_ids
            .iter()
            .map(|id| reference_field(&papers[id.as_str()].msc_primary))
            .collect();
        let field_ids: Vec<usize> = canonical
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let paper_field: Vec<usize> = canonical
            .iter()
            .map(|c| field_ids.iter().position(|f| f == c).unwrap())
            .collect();
        let theorem_paper: Vec<usize> = theorem_ids
            .iter()
            .map(|(p, _)| paper_pos(p).expect("theorem of known paper"))
            .collect();

        let share_author = |a: usize, b: usize| {
            let pa = papers[paper_ids[a].as_str()];
            let pb = papers[paper_ids[b].as_str()];
            pa.author_ids.iter().any(|x| pb.author_ids.contains(x))
        };

        let nt = theorem_ids.len();
        let mut t_raw = vec![vec![0.0; nt]; nt];
        for c in &records.theorem_citations {
            let (Some(src), Some(dst)) = (
                theorem_pos(&c.src.paper_id, &c.src.theorem_id),
                theorem_pos(&c.dst.paper_id, &c.dst.theorem_id),
            ) else {
                continue;
            };
            if src == dst {
                continue;
            }
            let (ps, pd) = (theorem_paper[src], theorem_paper[dst]);
            t_raw[dst][src] = if ps == pd {
                0.05
            } else if share_author(ps, pd) {
                0.1
            } else {
                1.0
            };
        }

        let np = paper_ids.len();
        let mut p_raw = vec![vec![0.0; np]; np];
        for c in &records.paper_citations {
            let (Some(src), Some(dst)) = (paper_pos(&c.src), paper_pos(&c.dst)) else {
                continue;
            };
            if src == dst {
                continue;
            }
            p_raw[dst][src] = if share_author(src, dst) { 0.1 } else { 1.0 };
        }

        let nf = field_ids.len();
        let mut f_raw = vec![vec![0.0; nf]; nf];
        for fi in 0..nf {
            for fj in 0..nf {
                let mut count = 0.0;
                for p1 in 0..np {
                    for p2 in 0..np {
                        if paper_field[p1] == fi && paper_field[p2] == fj && p_raw[p1][p2] > 0.0 {
                            count += 1.0;
                        }
                    }
                }
                f_raw[fi][fj] = count;
            }
        }

        DenseModel {
            t_norm: normalize_columns(&t_raw),
            p_norm: normalize_columns(&p_raw),
            f_norm: normalize_columns(&f_raw),
            theorem_ids,
            paper_ids,
            field_ids,
            t_raw,
            p_raw,
            f_raw,
            theorem_paper,
            paper_field,
        }
    }

    pub fn uniform(&self) -> DenseState {
        let (nt, np, nf) = (
            self.theorem_ids.len(),
            self.paper_ids.len(),
            self.field_ids.len(),
        );
        DenseState {
            theorem: vec![1.0 / nt as f64; nt],
            paper: vec![1.0 / np as f64; np],
            field: vec![1.0 / nf as f64; nf],
        }
    }

    /// One synchronous update; `None` if a level with more than one entity
    /// sums to zero before normalization.
    pub fn step(&self, u: &DenseState, hp: (f64, f64, f64, f64)) -> Option<DenseState> {
        let (alpha_t, alpha_p, beta_p, alpha_f) = hp;
        let nt = self.theorem_ids.len();
        let np = self.paper_ids.len();
        let nf = self.field_ids.len();

        let mut hat_t = vec![0.0; nt];
        for t in 0..nt {
            let mut gathered = 0.0;
            for t2 in 0..nt {
                if self.t_raw[t][t2] > 0.0 {
                    gathered += self.t_norm[t][t2] * u.theorem[t2];
                }
            }
            let own_paper = u.paper[self.theorem_paper[t]];
            hat_t[t] = alpha_t * gathered + (1.0 - alpha_t) * own_paper / (nt as f64 / np as f64);
        }

        let mut hat_p = vec![0.0; np];
        for p in 0..np {
            let mut gathered = 0.0;
            for p2 in 0..np {
                if self.p_raw[p][p2] > 0.0 {
                    gathered += self.p_norm[p][p2] * u.paper[p2];
                }
            }
            let own_field = u.field[self.paper_field[p]];
            let mut best: f64 = 0.0;
            for t in 0..nt {
                if self.theorem_paper[t] == p && u.theorem[t] > best {
                    best = u.theorem[t];
                }
            }
            hat_p[p] = alpha_p * gathered
                + beta_p * own_field / (np as f64 / nf as f64)
                + (1.0 - alpha_p - beta_p) * best;
        }

        let mut hat_f = vec![0.0; nf];
        for f in 0..nf {
            let mut gathered = 0.0;
            for f2 in 0..nf {
                if self.f_raw[f][f2] > 0.0 {
                    gathered += self.f_norm[f][f2] * u.field[f2];
                }
            }
            let mut excess = 0.0;
            for p in 0..np {
                if self.paper_field[p] == f {
                    let d = u.paper[p] - 1.0 / np as f64;
                    if d > 0.0 {
                        excess += d;
                    }
                }
            }
            hat_f[f] = alpha_f * gathered + (1.0 - alpha_f) * excess;
        }

        Some(DenseState {
            theorem: normalize(hat_t)?,
            paper: normalize(hat_p)?,
            field: normalize(hat_f)?,
        })
    }

    pub fn solve(
        &self,
        hp: (f64, f64, f64, f64),
        tolerance: f64,
        max_iterations: usize,
        start: DenseState,
    ) -> DenseRun {
        let mut state = start;
        for k in 1..=max_iterations {
            let Some(next) = self.step(&state, hp) else {
                return DenseRun {
                    state,
                    iterations: k - 1,
                    converged: false,
                    degenerate: true,
                };
            };
            let done = state.residual(&next) < tolerance;
            state = next;
            if done {
                return DenseRun {
                    state,
                    iterations: k,
                    converged: true,
                    degenerate: false,
                };
            }
        }
        DenseRun {
            state,
            iterations: max_iterations,
            converged: false,
            degenerate: false,
        }
    }

    /// `I[f][f']` over canonical field indices by a double loop over all
    /// paper pairs.
    pub fn impact(&self, paper_scores: &[f64]) -> [[f64; 13]; 13] {
        let np = self.paper_ids.len();
        let mut out = [[0.0; 13]; 13];
        for f in 0..13 {
            for f2 in 0..13 {
                let mut total = 0.0;
                for p in 0..np {
                    for p2 in 0..np {
                        if self.field_ids[self.paper_field[p]] == f
                            && self.field_ids[self.paper_field[p2]] == f2
                        {
                            total += self.p_norm[p][p2] * paper_scores[p2];
                        }
                    }
                }
                out[f][f2] = total;
            }
        }
        out
    }

    /// Papers that cite at least one other paper.
    pub fn citing_papers(&self) -> Vec<usize> {
        let np = self.paper_ids.len();
        (0..np)
            .filter(|&p2| (0..np).any(|p| self.p_raw[p][p2] > 0.0))
            .collect()
    }
}

fn normalize(v: Vec<f64>) -> Option<Vec<f64>> {
    if v.len() == 1 {
        return Some(vec![1.0]);
    }
    let total: f64 = v.iter().sum();
    if total <= 0.0 {
        return None;
    }
    Some(v.into_iter().map(|x| x / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_table_spot_checks() {
        assert_eq!(reference_field("06"), 0);
        assert_eq!(reference_field("62"), 11);
        assert_eq!(reference_field("37"), 6);
        assert_eq!(reference_field("90"), 9);
        assert_eq!(reference_field("99"), 12);
        assert_eq!(reference_field("4A"), 12);
    }
}
