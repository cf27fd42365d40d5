//! Scores three partitions of the 31-evidence problem.

use dsclust::metaconflict::{conflict_matrix, evaluate_partition, Partition};
use dsclust::problem::{canonical_partition, generate, ProblemSpec};

fn main() -> dsclust::Result<()> {
    let problem = generate(&ProblemSpec { seed: 7, ..Default::default() })?;
    let ev = &problem.evidence;
    let n = ev.len();

    let cm = conflict_matrix(ev)?;
    let conflicting = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .filter(|&(j, k)| cm.get(j, k) > 0.0)
        .count();
    println!("{conflicting} of {} pairs conflict", n * (n - 1) / 2);

    let canonical = canonical_partition(ev, &problem.frame)?;
    let by_size = Partition::new(ev.iter().map(|e| e.focal().len() - 1).collect(), 5)?;
    let round_robin = Partition::new((0..n).map(|m| m % 5).collect(), 5)?;
    for (name, p) in [("smallest element", &canonical), ("subset size", &by_size), ("round robin", &round_robin)] {
        let r = evaluate_partition(ev, p, 0.0)?;
        let cs: Vec<String> = r.cluster_conflicts.iter().map(|c| format!("{c:.3}")).collect();
        println!("{name:<17} Mcf {:.6}  clusters [{}]", r.mcf, cs.join(" "));
    }
    Ok(())
}
