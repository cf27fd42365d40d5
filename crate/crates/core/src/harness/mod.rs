//! End-to-end runs, seeded batches and trace files.
//!
//! A run iterates the network until it converges. In unknown-k mode the
//! count determination is recomputed from the grid every iteration and its
//! gradual determination drives the domain term. In fixed-k mode the network
//! has `k` columns and no domain term.

mod batch;
mod config;
mod trace;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::annealer::{self, Coupling, HyperParams};
use crate::count::{compute_count_state, CountState, PriorSpec};
use crate::error::{Error, Result};
use crate::metaconflict::{conflict_matrix, evaluate_partition, McfReport, Partition};
use crate::problem::{self, Problem, ProblemSpec};
use crate::seeding;

pub use batch::{batch, BatchSummary, Failure, MatchedStats, ModeSummary, RunSummary};
pub use config::{load_config, parse_config};
pub use trace::{emit_trace, format_grid, write_scalars};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Mode {
    #[default]
    UnknownK,
    FixedK(usize),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::UnknownK => f.write_str("unknown-k"),
            Mode::FixedK(k) => write!(f, "fixed-k:{k}"),
        }
    }
}

/// `unknown-k`, `fixed-k` (five clusters) or `fixed-k:K`.
impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "unknown-k" => Ok(Mode::UnknownK),
            None if s == "fixed-k" => Ok(Mode::FixedK(5)),
            Some(("fixed-k", k)) => k
                .trim()
                .parse()
                .map(Mode::FixedK)
                .map_err(|e| Error::Config(format!("fixed-k cluster count {k:?}: {e}"))),
            _ => Err(Error::Config(format!(
                "mode must be unknown-k, fixed-k or fixed-k:K, got {s:?}"
            ))),
        }
    }
}

impl TryFrom<String> for Mode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Mode> for String {
    fn from(m: Mode) -> String {
        m.to_string()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceOptions {
    /// Directory for trace files; nothing is written without it.
    pub dir: Option<PathBuf>,
    /// Keep one scalar record per iteration.
    pub scalars: bool,
    /// Keep a voltage grid every this many iterations (0 disables).
    pub grid_every: usize,
}

impl TraceOptions {
    pub fn enabled(&self) -> bool {
        self.scalars || self.grid_every > 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    /// Network columns in unknown-k mode; defaults to the frame size plus
    /// one. The prior covers the same range of counts.
    pub columns: Option<usize>,
    pub problem: ProblemSpec,
    pub params: HyperParams,
    pub prior: PriorSpec,
    pub trace: TraceOptions,
    /// Where the CLI and `batch` write result files.
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Number of network columns for a problem of `frame_size`.
    pub fn column_count(&self, frame_size: usize) -> usize {
        match self.mode {
            Mode::UnknownK => self.columns.unwrap_or(frame_size + 1),
            Mode::FixedK(k) => k,
        }
    }

    pub fn validate(&self, n_evidence: usize, frame_size: usize) -> Result<()> {
        self.params.validate()?;
        PriorSpec {
            max_count: self.column_count(frame_size).max(1),
            ..self.prior.clone()
        }
        .validate()?;
        match self.mode {
            Mode::FixedK(k) if k < 1 || k > n_evidence => Err(Error::Config(format!(
                "fixed-k needs 1 <= k <= {n_evidence}, got {k}"
            ))),
            Mode::UnknownK if self.column_count(frame_size) < 2 => Err(Error::Config(
                "unknown-k needs at least two columns".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Same configuration with problem and noise both seeded by `seed`.
    pub fn with_seed(&self, seed: u64) -> RunConfig {
        let mut c = self.clone();
        c.problem.seed = seed;
        c.params.seed = seed;
        c
    }
}

/// One row of the scalar trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub t: usize,
    pub entropy: f64,
    pub alpha: f64,
    /// Metaconflict of the argmax partition at this iteration.
    pub mcf: f64,
    pub cluster_conflicts: Vec<f64>,
    /// Count determination at this iteration (unknown-k only).
    pub count: Option<CountState>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSnapshot {
    pub t: usize,
    pub rows: usize,
    pub cols: usize,
    /// Output voltages, row-major.
    pub v: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub mode: Mode,
    pub seed: u64,
    pub partition: Partition,
    pub report: McfReport,
    /// Nonempty clusters in the partition.
    pub cluster_count: usize,
    pub iterations: usize,
    /// Every row ended one-hot; false when the iteration cap stopped the run.
    pub crisp: bool,
    pub final_entropy: f64,
    pub final_alpha: f64,
    /// Final gradual determination and posterior (unknown-k only).
    pub gd: Option<Vec<f64>>,
    pub posterior: Option<Vec<f64>>,
    /// How many times the count determination was evaluated.
    pub count_evaluations: usize,
    #[serde(skip)]
    pub trace: Vec<IterationRecord>,
    #[serde(skip)]
    pub snapshots: Vec<GridSnapshot>,
}

impl RunResult {
    pub fn gd_max(&self) -> Option<f64> {
        self.gd
            .as_ref()
            .map(|g| g.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Generates the configured problem and runs on it.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    let seed = config.params.seed;
    let problem = problem::generate(&config.problem).map_err(|e| wrap(seed, e))?;
    run_on(config, &problem)
}

/// Runs on a given problem. Trace files are written when the config names
/// a trace directory.
pub fn run_on(config: &RunConfig, problem: &Problem) -> Result<RunResult> {
    let seed = config.params.seed;
    let result = iterate(config, problem).map_err(|e| wrap(seed, e))?;
    if let Some(dir) = &config.trace.dir {
        if config.trace.enabled() {
            emit_trace(&result, dir).map_err(|e| wrap(seed, e))?;
        }
    }
    Ok(result)
}

fn wrap(seed: u64, e: Error) -> Error {
    match e {
        Error::Run { .. } => e,
        other => Error::Run {
            seed,
            source: Box::new(other),
        },
    }
}

fn iterate(config: &RunConfig, problem: &Problem) -> Result<RunResult> {
    let evidence = &problem.evidence;
    let frame_size = problem.frame.size();
    config.validate(evidence.len(), frame_size)?;
    let params = &config.params;
    let cols = config.column_count(frame_size);

    if cols == 1 {
        // one cluster needs no network
        let partition = Partition::new(vec![0; evidence.len()], 1)?;
        let report = evaluate_partition(evidence, &partition, 0.0)?;
        return Ok(RunResult {
            mode: config.mode,
            seed: params.seed,
            cluster_count: partition.nonempty_clusters(),
            partition,
            report,
            iterations: 0,
            crisp: true,
            final_entropy: 0.0,
            final_alpha: 0.0,
            gd: None,
            posterior: None,
            count_evaluations: 0,
            trace: Vec::new(),
            snapshots: Vec::new(),
        });
    }

    let unknown_k = config.mode == Mode::UnknownK;
    let prior = PriorSpec {
        max_count: cols,
        ..config.prior.clone()
    };
    let conflicts = conflict_matrix(evidence)?;
    let coupling = Coupling::new(&conflicts, params);
    let mut rng = seeding::stream(params.seed, seeding::NOISE_STREAM);
    let mut state = annealer::init_state(evidence.len(), cols, params, &mut rng)?;

    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    let mut count_evaluations = 0;
    loop {
        let (raw, alpha) = annealer::entropy(&state)?;
        let count = if unknown_k {
            count_evaluations += 1;
            Some(compute_count_state(evidence, &state, &prior, alpha)?)
        } else {
            None
        };
        let converged = annealer::has_converged(&state, params);

        if config.trace.scalars {
            let c0 = count.as_ref().map_or(0.0, |c| c.c0);
            let report =
                evaluate_partition(evidence, &annealer::extract_partition(&state), c0)?;
            trace.push(IterationRecord {
                t: state.iteration(),
                entropy: raw,
                alpha,
                mcf: report.mcf,
                cluster_conflicts: report.cluster_conflicts,
                count: count.clone(),
            });
        }
        let every = config.trace.grid_every;
        if every > 0 && (state.iteration() % every == 0 || converged) {
            snapshots.push(GridSnapshot {
                t: state.iteration(),
                rows: state.rows(),
                cols: state.cols(),
                v: state.voltages().to_vec(),
            });
        }

        if converged {
            let partition = annealer::extract_partition(&state);
            let c0 = count.as_ref().map_or(0.0, |c| c.c0);
            let report = evaluate_partition(evidence, &partition, c0)?;
            return Ok(RunResult {
                mode: config.mode,
                seed: params.seed,
                cluster_count: partition.nonempty_clusters(),
                partition,
                report,
                iterations: state.iteration(),
                crisp: annealer::is_crisp(&state, params),
                final_entropy: raw,
                final_alpha: alpha,
                gd: count.as_ref().map(|c| c.gd.clone()),
                posterior: count.map(|c| c.posterior),
                count_evaluations,
                trace,
                snapshots,
            });
        }
        let gd = count.as_ref().map(|c| c.gd.as_slice());
        state = annealer::step(&state, &coupling, gd, params)?;
    }
}
