//! The direct proof at p = 4 and the doubling step on one random pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharplp::doubling::{direct_p4, doubling_step, psi};
use sharplp::{MeasureSpace, SimpleFunction};

fn main() -> sharplp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 6;
    let mut draw = |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|_| rng.random_range(lo..hi)).collect() };
    let f = SimpleFunction::new(draw(0.05, 2.0))?;
    let g = SimpleFunction::new(draw(0.05, 2.0))?;
    let space = MeasureSpace::new(draw(0.1, 2.0))?;

    let p4 = direct_p4(&f, &g, &space)?;
    println!("p = 4: alpha {:.6}, beta {:.6}, beta^2 - 2 - 2 alpha^2 = {:.1e}", p4.alpha, p4.beta, p4.identity_gap);
    for link in &p4.links {
        println!("  {:<20} {:.10} vs {:.10} slack {:+.3e}", link.name, link.lhs, link.rhs, link.slack);
    }

    for p in [2.0, 4.0, -1.0] {
        let step = doubling_step(&f, &g, &space, p)?;
        println!("p = {p} -> {}: gamma {:.6}, closes: {}", 2.0 * p, step.gamma, step.chain_closes);
        for link in &step.links {
            println!("  {:<16} {:?} slack {:+.3e} holds {}", link.name, link.direction, link.slack, link.holds);
        }
    }

    for t in [0.25, 0.5, 1.5] {
        println!("psi_{t}(0.4) = {:+.8}", psi(t, 0.4));
    }
    Ok(())
}
