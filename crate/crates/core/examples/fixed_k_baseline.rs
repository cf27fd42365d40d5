//! Fixed-k runs against the zero-conflict partition on the same problems.
//!
//! cargo run --release --example fixed_k_baseline -- [k]

use dsclust::metaconflict::evaluate_partition;
use dsclust::problem::{canonical_partition, generate};
use dsclust::{run, Mode, RunConfig};

fn main() -> dsclust::Result<()> {
    let k = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    println!("seed  iter  crisp  sizes                 Mcf     canonical");
    for seed in 0..5 {
        let config = RunConfig { mode: Mode::FixedK(k), ..Default::default() }.with_seed(seed);
        let r = run(&config)?;
        let problem = generate(&config.problem)?;
        let best = evaluate_partition(&problem.evidence, &canonical_partition(&problem.evidence, &problem.frame)?, 0.0)?;
        println!(
            "{seed:<5} {:>4}  {:<5}  {:<20}  {:.4}  {:.4}",
            r.iterations,
            r.crisp,
            format!("{:?}", r.partition.sizes()),
            r.report.mcf,
            best.mcf
        );
    }
    Ok(())
}
