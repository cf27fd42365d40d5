//! Writes the scalar trace and voltage grids of one run.
//!
//! cargo run --release --example emit_trace -- [dir]

use std::path::PathBuf;

use dsclust::{run, DomainTerm, RunConfig};

fn main() -> dsclust::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("dsclust_trace"));
    let mut config = RunConfig::default().with_seed(2);
    config.params.domain_term = DomainTerm::Literal;
    config.params.max_iterations = 200;
    config.trace.dir = Some(dir.clone());
    config.trace.scalars = true;
    config.trace.grid_every = 25;
    let r = run(&config)?;

    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| dsclust::Error::Io { path: dir.clone(), source: e })?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    files.sort();
    println!("{} iterations traced into {}", r.trace.len(), dir.display());
    for f in files {
        println!("  {f}");
    }
    Ok(())
}
