//! Power means, the mean form of the constant case, and the improved AGM chain.

use sharplp::means::{agm_chain, power_mean, qmeans_sides};

fn main() -> sharplp::Result<()> {
    let (x, y) = (4.0, 1.0);
    for q in [-2.0, -1.0, 0.0, 1.0, 2.0, 8.0, 40.0] {
        println!("M_{q}({x}, {y}) = {:.12}", power_mean(x, y, q)?);
    }

    for p in [-1.5, 0.5, 1.5, 3.0] {
        let s = qmeans_sides(x, y, p)?;
        println!("p = {p}: ((M_p+M_-p)/2)^(p-1) M_p = {:.10}, M_1^p = {:.10}, gap {:+.3e}", s.lhs, s.rhs, s.gap);
    }

    let chain = agm_chain(x, y, 3.0)?;
    println!("AGM chain at p = 3: {:?} ordered: {}", chain.terms, chain.is_ordered(1e-12));
    Ok(())
}
