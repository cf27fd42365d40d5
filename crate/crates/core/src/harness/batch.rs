//! Seeded batches in both modes.
//!
//! Seed `s` generates the problem and the initial noise of both runs, so the
//! unknown-k and fixed-k results for one seed are directly comparable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{run, Mode, RunConfig, RunResult};
use crate::error::{Error, Result};

/// How many of the lowest-Mcf runs the best-of statistics use.
pub const BEST_OF: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub iterations: usize,
    pub crisp: bool,
    pub cluster_count: usize,
    pub cluster_sizes: Vec<usize>,
    pub mcf: f64,
    pub c0: f64,
    pub final_alpha: f64,
    pub gd_max: Option<f64>,
}

impl RunSummary {
    fn from_result(r: &RunResult) -> Self {
        RunSummary {
            seed: r.seed,
            iterations: r.iterations,
            crisp: r.crisp,
            cluster_count: r.cluster_count,
            cluster_sizes: r.partition.sizes(),
            mcf: r.report.mcf,
            c0: r.report.domain_conflict,
            final_alpha: r.final_alpha,
            gd_max: r.gd_max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSummary {
    pub mode: Mode,
    pub runs: Vec<RunSummary>,
    pub failures: Vec<Failure>,
    pub crisp_runs: usize,
    pub cluster_count_histogram: BTreeMap<usize, usize>,
    pub mean_iterations: f64,
    /// Seeds of the (up to) four lowest-Mcf runs, best first.
    pub best_seeds: Vec<u64>,
    pub best_of_4_mcf: f64,
    pub mean_of_4_mcf: f64,
    pub mcf_per_cluster: f64,
    pub mcf_per_evidence: f64,
}

impl ModeSummary {
    fn new(mode: Mode, outcomes: &[(u64, Result<RunResult>)], n_evidence: usize) -> Self {
        let mut runs = Vec::new();
        let mut failures = Vec::new();
        for (seed, outcome) in outcomes {
            match outcome {
                Ok(r) => runs.push(RunSummary::from_result(r)),
                Err(e) => failures.push(Failure {
                    seed: *seed,
                    kind: e.kind().to_string(),
                    message: e.to_string(),
                }),
            }
        }
        let mut histogram = BTreeMap::new();
        for r in &runs {
            *histogram.entry(r.cluster_count).or_insert(0) += 1;
        }
        let mut ranked: Vec<&RunSummary> = runs.iter().collect();
        ranked.sort_by(|a, b| a.mcf.total_cmp(&b.mcf));
        ranked.truncate(BEST_OF);
        let best_mean = |f: &dyn Fn(&RunSummary) -> f64| mean(ranked.iter().map(|r| f(r)));

        ModeSummary {
            mode,
            crisp_runs: runs.iter().filter(|r| r.crisp).count(),
            cluster_count_histogram: histogram,
            mean_iterations: mean(runs.iter().map(|r| r.iterations as f64)),
            best_seeds: ranked.iter().map(|r| r.seed).collect(),
            best_of_4_mcf: ranked.first().map_or(f64::NAN, |r| r.mcf),
            mean_of_4_mcf: best_mean(&|r| r.mcf),
            mcf_per_cluster: best_mean(&|r| r.mcf / r.cluster_count.max(1) as f64),
            mcf_per_evidence: best_mean(&|r| r.mcf / n_evidence.max(1) as f64),
            runs,
            failures,
        }
    }

    pub fn run(&self, seed: u64) -> Option<&RunSummary> {
        self.runs.iter().find(|r| r.seed == seed)
    }
}

/// Means over the seeds that succeeded in both modes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchedStats {
    pub seeds: Vec<u64>,
    pub unknown_k_mean_mcf: f64,
    pub fixed_k_mean_mcf: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSummary {
    pub seeds: Vec<u64>,
    pub n_evidence: usize,
    /// Fewer than four successful runs in some mode; the best-of-4
    /// statistics then cover fewer runs.
    pub degenerate: bool,
    pub unknown_k: ModeSummary,
    pub fixed_k: ModeSummary,
    pub matched: MatchedStats,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Runs seeds `config.params.seed ..` in unknown-k mode and in fixed-k mode.
/// The fixed-k cluster count comes from `config.mode` when it is fixed-k and
/// is the frame size otherwise. Failed runs are recorded, not fatal.
pub fn batch(config: &RunConfig, n_seeds: usize) -> Result<BatchSummary> {
    if n_seeds < 1 {
        return Err(Error::Config("batch needs at least one seed".into()));
    }
    let base = config.params.seed;
    let seeds: Vec<u64> = (0..n_seeds as u64).map(|i| base + i).collect();
    let fixed = match config.mode {
        Mode::FixedK(k) => Mode::FixedK(k),
        Mode::UnknownK => Mode::FixedK(config.problem.frame_size),
    };
    let n_evidence = (1usize << config.problem.frame_size.min(20)) - 1;

    let jobs: Vec<(Mode, u64)> = [Mode::UnknownK, fixed]
        .iter()
        .flat_map(|&m| seeds.iter().map(move |&s| (m, s)))
        .collect();
    let outcomes: Vec<(u64, Result<RunResult>)> = jobs
        .par_iter()
        .map(|&(mode, seed)| {
            let mut c = config.with_seed(seed);
            c.mode = mode;
            if let Some(dir) = &config.trace.dir {
                let tag = match mode {
                    Mode::UnknownK => "unknown-k".to_string(),
                    Mode::FixedK(k) => format!("fixed-k{k}"),
                };
                c.trace.dir = Some(dir.join(format!("{tag}_seed{seed}")));
            }
            (seed, run(&c))
        })
        .collect();
    let (unknown, fixed_outcomes) = outcomes.split_at(seeds.len());

    let unknown_k = ModeSummary::new(Mode::UnknownK, unknown, n_evidence);
    let fixed_k = ModeSummary::new(fixed, fixed_outcomes, n_evidence);
    let pairs: Vec<(f64, f64)> = seeds
        .iter()
        .filter_map(|&s| Some((unknown_k.run(s)?.mcf, fixed_k.run(s)?.mcf)))
        .collect();
    let matched = MatchedStats {
        seeds: seeds
            .iter()
            .copied()
            .filter(|&s| unknown_k.run(s).is_some() && fixed_k.run(s).is_some())
            .collect(),
        unknown_k_mean_mcf: mean(pairs.iter().map(|p| p.0)),
        fixed_k_mean_mcf: mean(pairs.iter().map(|p| p.1)),
    };
    let summary = BatchSummary {
        degenerate: unknown_k.runs.len() < BEST_OF || fixed_k.runs.len() < BEST_OF,
        seeds,
        n_evidence,
        unknown_k,
        fixed_k,
        matched,
    };
    if let Some(dir) = &config.output_dir {
        summary.write(dir)?;
    }
    Ok(summary)
}

impl BatchSummary {
    /// `summary.json` and `summary.txt` in `dir`.
    pub fn write(&self, dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let json = dir.join("summary.json");
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::io(&json, std::io::Error::other(e)))?;
        std::fs::write(&json, text).map_err(|e| Error::io(&json, e))?;
        let txt = dir.join("summary.txt");
        std::fs::write(&txt, self.table()).map_err(|e| Error::io(&txt, e))
    }

    /// Plain-text table of the per-mode statistics.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} seeds, {} pieces of evidence{}",
            self.seeds.len(),
            self.n_evidence,
            if self.degenerate { " (degenerate: fewer than 4 runs)" } else { "" }
        );
        let _ = writeln!(out, "{:<28}{:>14}{:>14}", "", "unknown-k", self.fixed_k.mode.to_string());
        type Row = (&'static str, fn(&ModeSummary) -> String);
        let rows: [Row; 8] = [
            ("runs ok / failed", |m| format!("{}/{}", m.runs.len(), m.failures.len())),
            ("crisp runs", |m| m.crisp_runs.to_string()),
            ("mean iterations", |m| format!("{:.1}", m.mean_iterations)),
            ("best of 4 Mcf", |m| format!("{:.4}", m.best_of_4_mcf)),
            ("mean of 4 Mcf", |m| format!("{:.4}", m.mean_of_4_mcf)),
            ("Mcf / cluster", |m| format!("{:.4}", m.mcf_per_cluster)),
            ("Mcf / evidence", |m| format!("{:.4}", m.mcf_per_evidence)),
            ("cluster counts", |m| {
                m.cluster_count_histogram
                    .iter()
                    .map(|(k, n)| format!("{k}:{n}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            }),
        ];
        for (label, f) in rows {
            let _ = writeln!(out, "{label:<28}{:>14}{:>14}", f(&self.unknown_k), f(&self.fixed_k));
        }
        let _ = writeln!(
            out,
            "{:<28}{:>14.4}{:>14.4}",
            "matched mean Mcf", self.matched.unknown_k_mean_mcf, self.matched.fixed_k_mean_mcf
        );
        out
    }
}
