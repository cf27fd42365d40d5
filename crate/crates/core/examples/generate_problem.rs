//! Writes a generated problem file and reads it back.
//!
//! cargo run --example generate_problem -- [seed] [path]

use std::path::PathBuf;

use dsclust::problem::{format_problem, generate, read_problem, write_problem, MassMode, ProblemSpec};

fn main() -> dsclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("dsclust_problem.txt"));

    let problem = generate(&ProblemSpec { seed, ..Default::default() })?;
    write_problem(&path, &problem)?;
    assert_eq!(read_problem(&path)?, problem);
    print!("{}", format_problem(&problem));
    eprintln!("wrote {}", path.display());

    let ones = generate(&ProblemSpec { frame_size: 2, mass_mode: MassMode::AllOnes, seed })?;
    print!("{}", format_problem(&ones));
    Ok(())
}
