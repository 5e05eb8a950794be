//! The doubling step: validity at exponent `p` gives validity at `2p`, via the
//! triangle inequality for `f² + g² + 2fg`, the inequality at `p` applied to
//! `(f², g²)`, and the scalar bound on `ψ_t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{main_sides, RELATIVE_SLACK};
use crate::measure::{check_aligned, lp_functional, lp_norm, MeasureSpace, SimpleFunction};

/// `ψ_t(α) = (1+α)^{1+t} − (1+α²)^t − 2^t α`.
///
/// Nonnegative on `[0, ∞)` for `t ∈ [0, 1]` and nonpositive for `t > 1`.
pub fn psi(t: f64, alpha: f64) -> f64 {
    (1.0 + alpha).powf(1.0 + t) - (1.0 + alpha * alpha).powf(t) - 2f64.powf(t) * alpha
}

/// `(1+α)^{3/2} − √2 α − (1+α²)^{1/2}`, nonnegative on `[0, 1]` and zero at
/// both ends.
pub fn p4_scalar_gap(alpha: f64) -> f64 {
    (1.0 + alpha).powf(1.5) - std::f64::consts::SQRT_2 * alpha - (1.0 + alpha * alpha).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtMost,
    AtLeast,
}

/// One comparison `lhs ≤ rhs` or `lhs ≥ rhs` in a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    /// Nonnegative when the link holds exactly.
    pub slack: f64,
    pub holds: bool,
}

impl Link {
    pub fn new(name: &str, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let slack = match direction {
            Direction::AtMost => rhs - lhs,
            Direction::AtLeast => lhs - rhs,
        };
        let holds = slack >= -RELATIVE_SLACK * lhs.abs().max(rhs.abs());
        Link {
            name: name.to_string(),
            lhs,
            rhs,
            direction,
            slack,
            holds,
        }
    }
}

fn check_nonnegative_pair(f: &SimpleFunction, g: &SimpleFunction, space: &MeasureSpace) -> Result<()> {
    check_aligned(f, space)?;
    check_aligned(g, space)?;
    for h in [f, g] {
        if let Some((index, &value)) = h.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeInput { index, value });
        }
    }
    Ok(())
}

/// Rescales `(f, g)` so that `∫f^q + ∫g^q = 2`; returns the factor used.
fn normalize(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    q: f64,
) -> Result<(SimpleFunction, SimpleFunction, f64)> {
    let total = lp_functional(f, space, q)? + lp_functional(g, space, q)?;
    if total == 0.0 {
        return Err(Error::ZeroPair);
    }
    let scale = (total / 2.0).powf(-1.0 / q);
    Ok((f.scaled(scale)?, g.scaled(scale)?, scale))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct P4Report {
    /// Factor applied to `f` and `g` to reach `‖f‖₄⁴ + ‖g‖₄⁴ = 2`.
    pub scale: f64,
    /// `‖fg‖₂`.
    pub alpha: f64,
    /// `‖f² + g²‖₂`.
    pub beta: f64,
    /// `‖f + g‖₄²`.
    pub lhs: f64,
    /// `β + 2α`.
    pub bound_minkowski: f64,
    /// `√2 (1+α)^{3/2}`.
    pub bound_final: f64,
    /// `β² − 2 − 2α²`.
    pub identity_gap: f64,
    /// [`p4_scalar_gap`] at `α`.
    pub scalar_gap: f64,
    pub links: Vec<Link>,
}

impl P4Report {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

/// The `p = 4` case from the `p = 2` identity and the triangle inequality.
pub fn direct_p4(f: &SimpleFunction, g: &SimpleFunction, space: &MeasureSpace) -> Result<P4Report> {
    check_nonnegative_pair(f, g, space)?;
    let (f, g, scale) = normalize(f, g, space, 4.0)?;
    let x = f.product(&g)?;
    let y = f.product(&f)?.sum(&g.product(&g)?)?;
    let alpha = lp_norm(&x, space, 2.0)?;
    let beta = lp_norm(&y, space, 2.0)?;
    let lhs = lp_norm(&f.sum(&g)?, space, 4.0)?.powi(2);
    let bound_minkowski = beta + 2.0 * alpha;
    let bound_final = std::f64::consts::SQRT_2 * (1.0 + alpha).powf(1.5);
    let scalar_gap = p4_scalar_gap(alpha);
    let links = vec![
        Link::new("triangle", lhs, bound_minkowski, Direction::AtMost),
        Link::new("scalar", bound_minkowski, bound_final, Direction::AtMost),
        Link::new(
            "scalar_squared_out",
            (1.0 + alpha * alpha).sqrt(),
            (1.0 + alpha).powf(1.5) - std::f64::consts::SQRT_2 * alpha,
            Direction::AtMost,
        ),
    ];
    Ok(P4Report {
        scale,
        alpha,
        beta,
        lhs,
        bound_minkowski,
        bound_final,
        identity_gap: beta * beta - 2.0 - 2.0 * alpha * alpha,
        scalar_gap,
        links,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub p: f64,
    /// Factor applied to reach `‖f‖_{2p}^{2p} + ‖g‖_{2p}^{2p} = 2`.
    pub scale: f64,
    /// `‖fg‖_p`.
    pub gamma: f64,
    /// `‖f² + g²‖_p`.
    pub beta: f64,
    /// `2^{1/p}(1+γ)^{2−1/p}`; its `p`-th power is the right side of the
    /// main inequality at `2p` for the normalized pair.
    pub final_bound: f64,
    pub links: Vec<Link>,
    /// Whether the link directions compose into `‖f+g‖_{2p}² ≤ final_bound`.
    pub chain_closes: bool,
}

impl DoublingReport {
    pub fn all_links_hold(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

/// Checks each link of the doubling step from `p` to `2p` on one pair.
///
/// For `p ≥ 2` the links are `≤` and compose. For `p < 0` the first three
/// links reverse; the target `‖f+g‖_{2p}² ≤ 2^{1/p}(1+γ)^{2−1/p}` is still an
/// upper bound, since it is the reversed inequality at `2p` raised to `1/p`.
pub fn doubling_step(f: &SimpleFunction, g: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<DoublingReport> {
    if (0.0..2.0).contains(&p) || p.is_nan() {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "doubling covers p >= 2 and p < 0",
        });
    }
    check_nonnegative_pair(f, g, space)?;
    let (f, g, scale) = normalize(f, g, space, 2.0 * p)?;
    let x = f.product(&g)?;
    let f2 = f.product(&f)?;
    let g2 = g.product(&g)?;
    let y = f2.sum(&g2)?;
    let gamma = lp_norm(&x, space, p)?;
    let beta = lp_norm(&y, space, p)?;
    let lhs = lp_norm(&f.sum(&g)?, space, 2.0 * p)?.powi(2);
    let at_p = main_sides(&f2, &g2, space, p)?;
    let two_root = 2f64.powf(1.0 / p);
    let middle = two_root * (1.0 + gamma * gamma).powf(1.0 - 1.0 / p) + 2.0 * gamma;
    let final_bound = two_root * (1.0 + gamma).powf(2.0 - 1.0 / p);
    let forward = if p >= 2.0 { Direction::AtMost } else { Direction::AtLeast };
    let links = vec![
        Link::new("triangle", lhs, beta + 2.0 * gamma, forward),
        Link::new("inequality_at_p", at_p.lhs, at_p.rhs, forward),
        Link::new("psi", middle, final_bound, forward),
        Link::new("target", lhs, final_bound, Direction::AtMost),
    ];
    Ok(DoublingReport {
        p,
        scale,
        gamma,
        beta,
        final_bound,
        links,
        chain_closes: p >= 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::main_sides;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn func(v: &[f64]) -> SimpleFunction {
        SimpleFunction::new(v.to_vec()).unwrap()
    }

    fn random_pair(seed: u64, n: usize) -> (SimpleFunction, SimpleFunction, MeasureSpace) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |lo: f64| (0..n).map(|_| rng.random_range(lo..2.0)).collect::<Vec<f64>>();
        let f = func(&draw(0.05));
        let g = func(&draw(0.05));
        let w = MeasureSpace::new(draw(0.1)).unwrap();
        (f, g, w)
    }

    #[test]
    fn psi_examples() {
        for t in [-1.0, 0.3, 2.0] {
            assert_eq!(psi(t, 0.0), 0.0);
        }
        for a in [0.0, 0.4, 3.0] {
            assert!(psi(1.0, a).abs() < 1e-14);
        }
        assert!((psi(0.5, 0.25) - 0.0132126889396796606).abs() < 1e-15);
    }

    #[test]
    fn p4_equality_cases() {
        let two = MeasureSpace::counting(2).unwrap();
        let r = direct_p4(&func(&[1.0, 2.0]), &func(&[1.0, 2.0]), &two).unwrap();
        assert!((r.alpha - 1.0).abs() < 1e-14 && (r.beta - 2.0).abs() < 1e-14);
        assert!((r.lhs - 4.0).abs() < 1e-13 && (r.bound_final - 4.0).abs() < 1e-13);
        let r = direct_p4(&func(&[1.0, 0.0]), &func(&[0.0, 3.0]), &two).unwrap();
        assert_eq!(r.alpha, 0.0);
        assert!((r.beta - 2f64.sqrt()).abs() < 1e-14);
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-14 && (r.bound_final - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(
            direct_p4(&func(&[0.0, 0.0]), &func(&[0.0, 0.0]), &two),
            Err(Error::ZeroPair)
        );
    }

    #[test]
    fn p4_random_pair() {
        let (f, g, w) = random_pair(7, 5);
        let r = direct_p4(&f, &g, &w).unwrap();
        assert!(r.holds());
        assert!(r.links.iter().all(|l| l.slack > 0.0), "{r:?}");
        assert!(r.identity_gap.abs() <= 1e-12);
        assert!(r.alpha <= 1.0 + 1e-12 && r.beta <= 2.0 + 1e-12);
        let main = main_sides(&f, &g, &w, 4.0).unwrap();
        let normalized = main.rhs * r.scale.powi(4);
        assert!((r.bound_final.powi(2) - normalized).abs() <= 1e-12 * normalized);
    }

    #[test]
    fn doubling_equality_case() {
        let two = MeasureSpace::counting(2).unwrap();
        let f = func(&[0.5, 1.5]);
        for p in [2.0, 4.0, -1.0] {
            let r = doubling_step(&f, &f, &two, p).unwrap();
            assert!((r.gamma - 1.0).abs() < 1e-13);
            for link in &r.links {
                assert!(link.slack.abs() <= 1e-12 * link.lhs.abs().max(1.0), "p={p} {link:?}");
            }
        }
    }

    #[test]
    fn doubling_from_two_matches_p4() {
        for seed in 0..20 {
            let (f, g, w) = random_pair(seed, 6);
            let r = doubling_step(&f, &g, &w, 2.0).unwrap();
            assert!(r.all_links_hold() && r.chain_closes);
            let main = main_sides(&f, &g, &w, 4.0).unwrap();
            let normalized = main.rhs * r.scale.powi(4);
            assert!((r.final_bound.powi(2) - normalized).abs() <= 1e-12 * normalized);
        }
    }

    #[test]
    fn doubling_negative_p() {
        for seed in 0..20 {
            let (f, g, w) = random_pair(100 + seed, 6);
            let r = doubling_step(&f, &g, &w, -1.0).unwrap();
            assert!(r.all_links_hold(), "{r:?}");
            assert!(!r.chain_closes);
            assert_eq!(r.links[0].direction, Direction::AtLeast);
        }
        let two = MeasureSpace::counting(2).unwrap();
        assert!(matches!(
            doubling_step(&func(&[1.0, 0.0]), &func(&[1.0, 1.0]), &two, -1.0),
            Err(Error::NonpositiveValueForNegativeP { .. })
        ));
        assert!(doubling_step(&func(&[1.0, 1.0]), &func(&[1.0, 1.0]), &two, 1.5).is_err());
    }
}
