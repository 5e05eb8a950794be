//! The exponent 2/p cannot be raised or lowered: the Taylor slope of
//! `g_{r,p}` at zero is `p(1-r)`, and a witness appears on the wrong side.

use sharplp::means::sharpness_probe;

fn main() -> sharplp::Result<()> {
    for (p, r) in [(3.0, 1.0), (3.0, 1.1), (5.0, 1.5), (-2.0, 0.9), (0.5, 0.9), (0.5, 1.2)] {
        let probe = sharpness_probe(p, r)?;
        println!(
            "p = {p:>4}, r = {r:>3}: slope {:+.8} (predicted {:+.8}), witness {:?}, violation up to {:?}",
            probe.slope_measured, probe.slope_predicted, probe.witness_s, probe.violation_extent
        );
    }
    Ok(())
}
