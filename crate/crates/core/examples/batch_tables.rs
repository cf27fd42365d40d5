//! Ten seeds in both modes, printed as the iteration / metaconflict tables.
//!
//! cargo run --release --example batch_tables -- [n_seeds]

use dsclust::{batch, RunConfig};

fn main() -> dsclust::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let summary = batch(&RunConfig::default(), n)?;
    print!("{}", summary.table());
    println!();
    println!("seed  mode        iter  crisp  clusters  Mcf      c0");
    for m in [&summary.unknown_k, &summary.fixed_k] {
        for r in &m.runs {
            println!(
                "{:<5} {:<11} {:>4}  {:<5}  {:>8}  {:.4}   {:.4}",
                r.seed,
                m.mode.to_string(),
                r.iterations,
                r.crisp,
                r.cluster_count,
                r.mcf,
                r.c0
            );
        }
    }
    Ok(())
}
