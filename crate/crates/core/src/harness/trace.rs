//! Trace files: `scalars.csv`, one row per iteration, and one
//! `grid_TTTTT.csv` per voltage snapshot.

use std::path::Path;

use super::{GridSnapshot, RunResult};
use crate::error::{Error, Result};

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn push_all(row: &mut Vec<String>, values: Option<&[f64]>, width: usize) {
    match values {
        Some(v) => row.extend(v.iter().map(|x| x.to_string())),
        None => row.extend(std::iter::repeat_n(String::new(), width)),
    }
}

/// Columns: `t, entropy, alpha, mcf, conflict_n..., posterior_r...,
/// gd_r..., existence_n..., at_least_r..., c0`. Count columns are empty in
/// fixed-k mode.
pub fn write_scalars(result: &RunResult, path: &Path) -> Result<()> {
    let cols = result.partition.cluster_count();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut header: Vec<String> = ["t", "entropy", "alpha", "mcf"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for prefix in ["conflict", "posterior", "gd", "existence", "at_least"] {
        header.extend((1..=cols).map(|i| format!("{prefix}_{i}")));
    }
    header.push("c0".into());
    w.write_record(&header).map_err(|e| csv_err(path, e))?;

    for rec in &result.trace {
        let mut row = vec![
            rec.t.to_string(),
            rec.entropy.to_string(),
            rec.alpha.to_string(),
            rec.mcf.to_string(),
        ];
        push_all(&mut row, Some(&rec.cluster_conflicts), cols);
        let count = rec.count.as_ref();
        push_all(&mut row, count.map(|c| c.posterior.as_slice()), cols);
        push_all(&mut row, count.map(|c| c.gd.as_slice()), cols);
        let support: Option<Vec<f64>> =
            count.map(|c| c.existence.iter().map(|e| e.support).collect());
        push_all(&mut row, support.as_deref(), cols);
        push_all(&mut row, count.map(|c| c.at_least.as_slice()), cols);
        row.push(count.map_or(String::new(), |c| c.c0.to_string()));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Header `c1..cR`, then one line per piece of evidence.
pub fn format_grid(snapshot: &GridSnapshot) -> String {
    let mut out = (1..=snapshot.cols)
        .map(|n| format!("c{n}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for row in snapshot.v.chunks(snapshot.cols) {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Writes whatever the run recorded into `dir`, creating it if needed.
pub fn emit_trace(result: &RunResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    if !result.trace.is_empty() {
        write_scalars(result, &dir.join("scalars.csv"))?;
    }
    for snap in &result.snapshots {
        let path = dir.join(format!("grid_{:05}.csv", snap.t));
        std::fs::write(&path, format_grid(snap)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::harness::{run, RunConfig};

    #[test]
    fn files_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig::default();
        config.params.max_iterations = 3;
        config.trace.scalars = true;
        config.trace.grid_every = 1;
        config.trace.dir = Some(dir.path().to_path_buf());
        run(&config).unwrap();

        let scalars = std::fs::read_to_string(dir.path().join("scalars.csv")).unwrap();
        let mut lines = scalars.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(header.len(), 4 + 5 * 6 + 1);
        assert_eq!(header[..4], ["t", "entropy", "alpha", "mcf"]);
        assert_eq!(header.last(), Some(&"c0"));
        assert_eq!(lines.count(), 4);

        let grid = std::fs::read_to_string(dir.path().join("grid_00003.csv")).unwrap();
        assert_eq!(grid.lines().count(), 32);
        assert_eq!(grid.lines().nth(1).unwrap().split(',').count(), 6);
    }

    #[test]
    fn unwritable_dir_reports_path() {
        let file = tempfile::NamedTempFile::new().unwrap();
        let mut config = RunConfig::default();
        config.params.max_iterations = 1;
        config.trace.scalars = true;
        config.trace.dir = Some(file.path().join("sub"));
        let err = run(&config).unwrap_err();
        assert_eq!(err.kind(), "io");
        assert!(err.to_string().contains("sub"));
    }
}
