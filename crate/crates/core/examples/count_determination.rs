//! The count determination on a hand-made voltage grid.

use dsclust::count::{at_least_distribution, gradual_determination, posterior_counts, PriorSpec};

fn main() -> dsclust::Result<()> {
    // support for each of six candidate clusters existing
    let supports = [0.99, 0.97, 0.95, 0.9, 0.6, 0.05];
    let (at_least, theta) = at_least_distribution(&supports);
    println!("m(frame) = {theta:.6}");
    for (r, m) in at_least.iter().enumerate() {
        println!("m(|chi| >= {}) = {m:.6}", r + 1);
    }

    let prior = PriorSpec::new(0.8, supports.len())?;
    let (posterior, c0) = posterior_counts(&at_least, theta, &prior)?;
    println!("c0 = {c0:.6}");
    for alpha in [1.0, 0.5, 0.1, 0.0] {
        let gd = gradual_determination(&posterior, alpha);
        let row: Vec<String> = gd.iter().map(|g| format!("{g:.3}")).collect();
        println!("alpha {alpha:.1}: gd [{}]", row.join(" "));
    }
    Ok(())
}
