use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dsclust::harness::{self, load_config, Mode, RunConfig};
use dsclust::metaconflict::evaluate_partition;
use dsclust::problem::{self, MassMode};
use dsclust::{DomainTerm, Error, Result};

#[derive(Parser)]
#[command(name = "dsclust", version, about = "Cluster simple support functions into an unknown number of clusters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run; prints the result as JSON.
    Run {
        #[command(flatten)]
        common: Common,
        /// Problem file to cluster instead of a generated problem.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Seeds in both modes; prints the summary table.
    Batch {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
    },
    /// Writes a generated problem file.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        frame_size: usize,
        /// uniform or all-ones
        #[arg(long, default_value = "uniform")]
        mass_mode: MassMode,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Scores a partition file against a problem file; prints the report as JSON.
    Eval {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Domain conflict to include.
        #[arg(long, default_value_t = 0.0)]
        c0: f64,
    },
}

/// Flags shared by `run` and `batch`. They override the config file.
#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// unknown-k, fixed-k or fixed-k:K
    #[arg(long)]
    mode: Option<Mode>,
    /// Prior parameter.
    #[arg(long)]
    p: Option<f64>,
    /// Network columns in unknown-k mode.
    #[arg(long)]
    columns: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write per-iteration scalars (and grids with --grid-every) here.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    #[arg(long)]
    grid_every: Option<usize>,
    /// cumulative or literal
    #[arg(long)]
    domain_term: Option<DomainTerm>,
    #[arg(long)]
    self_coupling: Option<bool>,
    /// uniform or all-ones
    #[arg(long)]
    mass_mode: Option<MassMode>,
    /// Directory for result files.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            c = c.with_seed(seed);
        }
        if let Some(mode) = self.mode {
            c.mode = mode;
        }
        if let Some(p) = self.p {
            c.prior.p = p;
        }
        if self.columns.is_some() {
            c.columns = self.columns;
        }
        if let Some(n) = self.max_iter {
            c.params.max_iterations = n;
        }
        if let Some(dir) = &self.trace_dir {
            c.trace.dir = Some(dir.clone());
            c.trace.scalars = true;
        }
        if let Some(every) = self.grid_every {
            c.trace.grid_every = every;
        }
        if let Some(term) = self.domain_term {
            c.params.domain_term = term;
        }
        if let Some(on) = self.self_coupling {
            c.params.self_coupling = on;
        }
        if let Some(mode) = self.mass_mode {
            c.problem.mass_mode = mode;
        }
        if self.out.is_some() {
            c.output_dir = self.out.clone();
        }
        Ok(c)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { common, problem } => {
            let config = common.config()?;
            let result = match problem {
                Some(path) => harness::run_on(&config, &problem::read_problem(&path)?)?,
                None => harness::run(&config)?,
            };
            let json = to_json(&result);
            if let Some(dir) = &config.output_dir {
                write_file(&dir.join("result.json"), &json)?;
                write_file(
                    &dir.join("partition.txt"),
                    &problem::format_partition(&result.partition),
                )?;
            }
            println!("{json}");
        }
        Command::Batch { common, seeds } => {
            let summary = harness::batch(&common.config()?, seeds)?;
            print!("{}", summary.table());
        }
        Command::Gen {
            seed,
            frame_size,
            mass_mode,
            output,
        } => {
            let p = problem::generate(&problem::ProblemSpec {
                frame_size,
                mass_mode,
                seed,
            })?;
            let text = problem::format_problem(&p);
            match output {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Eval {
            problem,
            partition,
            c0,
        } => {
            let p = problem::read_problem(&problem)?;
            let part = problem::read_partition(&partition)?;
            println!("{}", to_json(&evaluate_partition(&p.evidence, &part, c0)?));
        }
    }
    Ok(())
}

fn error_line(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "error": kind, "message": message.trim() })
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            error_line("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error_line(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
    }
}
