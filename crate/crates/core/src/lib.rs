//! Clustering of Dempster-Shafer simple support functions into an unknown
//! number of clusters.
//!
//! A Hopfield-style network assigns every piece of evidence to a column.
//! The conflict inside each column pushes evidence apart, and a belief over
//! the number of clusters, recomputed from the network every iteration and
//! annealed by the network's entropy, inhibits surplus columns.
//!
//! ```
//! use dsclust::problem::{generate, canonical_partition, ProblemSpec};
//! use dsclust::metaconflict::evaluate_partition;
//!
//! let problem = generate(&ProblemSpec::default()).unwrap();
//! let partition = canonical_partition(&problem.evidence, &problem.frame).unwrap();
//! let report = evaluate_partition(&problem.evidence, &partition, 0.0).unwrap();
//! assert_eq!(report.mcf, 0.0);
//! ```

pub mod annealer;
pub mod count;
pub mod error;
pub mod evidence;
pub mod harness;
pub mod metaconflict;
pub mod problem;
pub mod seeding;

pub use annealer::{DomainTerm, HyperParams, NetworkState};
pub use count::{CountState, PriorSpec};
pub use error::{Error, Result};
pub use evidence::{FocalSet, Frame, MassFunction, SimpleSupport};
pub use harness::{batch, run, BatchSummary, Mode, RunConfig, RunResult};
pub use metaconflict::{ConflictMatrix, McfReport, Partition};
pub use problem::{MassMode, Problem, ProblemSpec};
