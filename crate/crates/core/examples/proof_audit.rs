//! Sign patterns of the auxiliary functions for a few values of `c = 1/p`,
//! and the curvature of `H` along the hyperbolic parametrization.

use sharplp::audit::pair::curvature_column;
use sharplp::audit::{audit_chain, ChainContext};

fn main() -> sharplp::Result<()> {
    for c in [-1.0, 0.05, 0.3, 0.7, 2.0] {
        let report = audit_chain(&ChainContext::from_c(c)?, 4000)?;
        println!("c = {c} (p = {:.4}), all match: {}", report.p, report.all_match());
        for e in &report.entries {
            let roots: Vec<String> = e
                .observed
                .crossings
                .iter()
                .map(|x| format!("{:.6e}", 0.5 * (x.bracket_lo + x.bracket_hi)))
                .collect();
            println!("  {:<3} {:?} expected {:?} roots [{}]", e.name, e.observed.overall, e.expected, roots.join(", "));
        }
    }

    let xs: Vec<f64> = (1..=200).map(|i| 0.025 * i as f64).collect();
    for p in [-2.0, 0.5, 1.5, 3.0] {
        let col = curvature_column(p, &xs)?;
        println!("p = {p}: db/dx {:+}, d/dx dH/db {:+}, H is {:?}", col.db_dx_sign, col.ddx_dh_db_sign, col.observed);
    }
    Ok(())
}
