//! The trace inequality for positive matrices at p = 2, 4, 8, the
//! Lieb-Thirring link, and the non-commutative doubling step.

use sharplp::schatten::{lieb_thirring_check, random_psd, schatten_doubling, schatten_explore, schatten_verify};

fn main() -> sharplp::Result<()> {
    let a = random_psd(4, 1)?;
    let b = random_psd(4, 2)?;
    for p in [2.0, 4.0, 8.0] {
        let r = schatten_verify(&a, &b, p)?;
        let lt = lieb_thirring_check(&a, &b, p)?;
        println!(
            "p = {p}: tr(A+B)^p {:.8e} <= {:.8e} {}; Lieb-Thirring {:.6e} <= {:.6e}",
            r.lhs, r.rhs, r.satisfied, lt.lhs, lt.rhs
        );
    }

    let r = schatten_explore(&a, &b, 3.0)?;
    println!("p = 3 (conjectural: {}): {:.8e} vs {:.8e}", r.conjectural, r.lhs, r.rhs);

    let step = schatten_doubling(&a, &b, 2.0)?;
    println!("doubling 2 -> 4, gamma {:.6}:", step.gamma);
    for link in &step.links {
        println!("  {:<22} slack {:+.3e} holds {}", link.name, link.slack, link.holds);
    }
    Ok(())
}
