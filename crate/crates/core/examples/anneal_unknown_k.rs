//! One unknown-k run, following the count determination as it anneals.
//!
//! cargo run --release --example anneal_unknown_k -- [seed]

use dsclust::{run, RunConfig};

fn main() -> dsclust::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut config = RunConfig::default().with_seed(seed);
    config.trace.scalars = true;
    let r = run(&config)?;

    println!("   t   alpha     Mcf    c0    argmax  gd(argmax)");
    for rec in r.trace.iter().filter(|rec| rec.t % 50 == 0 || rec.t == r.iterations) {
        let c = rec.count.as_ref().expect("unknown-k records the count");
        let best = c.determined_count();
        println!(
            "{:>4}  {:.4}  {:.4}  {:.4}  {:>6}  {:.4}",
            rec.t, rec.alpha, rec.mcf, c.c0, best, c.gd[best - 1]
        );
    }
    println!(
        "{} iterations, crisp {}, {} clusters of sizes {:?}, Mcf {:.4}",
        r.iterations,
        r.crisp,
        r.cluster_count,
        r.partition.sizes(),
        r.report.mcf
    );
    Ok(())
}
