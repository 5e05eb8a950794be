//! Both sides of the sharpened triangle inequality on a small weighted space,
//! next to the Carbery bound, across the forward and reverse regions.

use sharplp::inequality::{detect_equality_case, main_sides, DEFAULT_EQUALITY_TOL};
use sharplp::{MeasureSpace, SimpleFunction};

fn main() -> sharplp::Result<()> {
    let space = MeasureSpace::new(vec![0.5, 1.0, 1.5, 0.25])?;
    let f = SimpleFunction::new(vec![1.0, 0.2, 0.7, 1.9])?;
    let g = SimpleFunction::new(vec![0.3, 1.1, 0.7, 0.05])?;

    println!("{:>6} {:>9} {:>14} {:>14} {:>14} {:>8}", "p", "region", "lhs", "rhs", "carbery", "holds");
    for p in [-2.0, 0.5, 1.5, 2.0, 3.0, 6.0] {
        let r = main_sides(&f, &g, &space, p)?;
        let carbery = r.carbery_rhs.map_or("-".to_string(), |c| format!("{c:.8}"));
        println!(
            "{p:>6} {:>9} {:>14.8} {:>14.8} {carbery:>14} {:>8}",
            format!("{:?}", r.region),
            r.lhs,
            r.rhs,
            r.satisfied
        );
    }

    let case = detect_equality_case(&f, &f, &space, DEFAULT_EQUALITY_TOL)?;
    println!("f against itself: {:?}", case.kind);
    Ok(())
}
