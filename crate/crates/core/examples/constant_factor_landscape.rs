//! The constant-case factor with q = 2/p over the three plotted windows:
//! its maximum on `[1/2,1] x [2,4]`, minimum on `[1/2,1] x [1,2]` and
//! maximum on `[0.001,1/2] x [0.01,1]`.

use sharplp::means::constant_factor_default;

fn sweep(alpha: (f64, f64), p: (f64, f64), n: usize) -> sharplp::Result<((f64, f64, f64), (f64, f64, f64))> {
    let mut lo = (f64::INFINITY, 0.0, 0.0);
    let mut hi = (f64::NEG_INFINITY, 0.0, 0.0);
    for j in 0..n {
        let pj = p.0 + (p.1 - p.0) * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let a = alpha.0 + (alpha.1 - alpha.0) * i as f64 / (n - 1) as f64;
            let v = constant_factor_default(a, pj)?;
            if v < lo.0 {
                lo = (v, a, pj);
            }
            if v > hi.0 {
                hi = (v, a, pj);
            }
        }
    }
    Ok((lo, hi))
}

fn main() -> sharplp::Result<()> {
    let windows = [
        ("alpha in [0.5,1], p in [2,4]", (0.5, 1.0), (2.0, 4.0)),
        ("alpha in [0.5,1], p in [1,2]", (0.5, 1.0), (1.0, 2.0)),
        ("alpha in [0.001,0.5], p in [0.01,1]", (0.001, 0.5), (0.01, 1.0)),
    ];
    for (label, alpha, p) in windows {
        let (lo, hi) = sweep(alpha, p, 300)?;
        println!("{label}");
        println!("  min {:.10} at alpha {:.4}, p {:.4}", lo.0, lo.1, lo.2);
        println!("  max {:.10} at alpha {:.4}, p {:.4}", hi.0, hi.1, hi.2);
    }
    Ok(())
}
