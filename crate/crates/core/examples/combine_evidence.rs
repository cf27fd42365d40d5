//! Dempster's rule on a few simple support functions.

use dsclust::evidence::{combine, discount_by_voltage, pairwise_conflict, Frame, SimpleSupport};

fn main() -> dsclust::Result<()> {
    let frame = Frame::new(3)?;
    let a = SimpleSupport::new(0, frame.set(&[1])?, 0.6)?;
    let b = SimpleSupport::new(1, frame.set(&[2, 3])?, 0.5)?;
    let c = SimpleSupport::new(2, frame.set(&[1, 2])?, 0.3)?;

    println!("c(a, b) = {}", pairwise_conflict(&a, &b)?);
    println!("c(a, c) = {}", pairwise_conflict(&a, &c)?);

    let bodies: Vec<_> = [&a, &b, &c].iter().map(|e| e.to_mass_function()).collect();
    let (m, k) = combine(&frame, &bodies)?;
    println!("k = {k:.6}");
    for (set, mass) in m.iter() {
        println!("  m({set}) = {mass:.6}");
    }

    let half = discount_by_voltage(&a, 0.5)?;
    println!("a at voltage 0.5: m({{1}}) = {}, m(frame) = {}", half.mass(&a.focal()), half.theta_mass());
    Ok(())
}
