//! Both sides of the main inequality, the cruder Carbery bound, equality
//! cases and the Jensen step on the reduced probability space.

use serde::Serialize;

use crate::audit::pair::{h_of_a, invert_b};
use crate::error::{Error, Result};
use crate::measure::{
    check_aligned, lp_functional_with, lp_norm_with, overlap_norm_with, ExponentRegion,
    MeasureSpace, SimpleFunction,
};
use crate::precision::Precision;

/// Relative slack used by every inequality check.
pub const RELATIVE_SLACK: f64 = 1e-9;

/// Default tolerance of [`detect_equality_case`].
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `(1+Γ)^{p−1}∫(|f|^p+|g|^p)`; absent when a norm vanishes.
    pub carbery_rhs: Option<f64>,
    /// `Γ = ‖fg‖_{p/2}/(‖f‖_p‖g‖_p)`; absent when a norm vanishes.
    pub gamma: Option<f64>,
    pub gamma_tilde: f64,
    pub region: ExponentRegion,
    pub satisfied: bool,
    /// `rhs − lhs` in the forward direction, `lhs − rhs` in reverse.
    pub slack: f64,
}

impl InequalityReport {
    fn assemble(
        lhs: f64,
        rhs: f64,
        carbery_rhs: Option<f64>,
        gamma: Option<f64>,
        gamma_tilde: f64,
        p: f64,
    ) -> Self {
        let region = ExponentRegion::of(p);
        let slack = if region.is_reversed() { lhs - rhs } else { rhs - lhs };
        let satisfied = slack >= -RELATIVE_SLACK * lhs.abs().max(rhs.abs());
        InequalityReport {
            lhs,
            rhs,
            carbery_rhs,
            gamma,
            gamma_tilde,
            region,
            satisfied,
            slack,
        }
    }

    /// Slack divided by `lhs`, comparable across scalings of `f` and `g`.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.lhs
    }
}

fn check_pair(f: &SimpleFunction, g: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<()> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    check_aligned(f, space)?;
    check_aligned(g, space)?;
    for h in [f, g] {
        if let Some((index, &value)) = h.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeInput { index, value });
        }
        if p > 1.0 && p < 2.0 {
            if let Some((index, &value)) = h.values().iter().enumerate().find(|(_, v)| **v == 0.0) {
                return Err(Error::NonpositiveValueInReverseRegion { index, value });
            }
        }
    }
    Ok(())
}

struct PairParts {
    big_f: f64,
    big_g: f64,
    gamma: Option<f64>,
    gamma_tilde: f64,
}

fn pair_parts(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<PairParts> {
    check_pair(f, g, space, p)?;
    let big_f = lp_functional_with(f, space, p, precision)?;
    let big_g = lp_functional_with(g, space, p, precision)?;
    let overlap = overlap_norm_with(f, g, space, p, precision)?;
    let norm_f = lp_norm_with(f, space, p, precision)?;
    let norm_g = lp_norm_with(g, space, p, precision)?;
    let gamma = if norm_f > 0.0 && norm_g > 0.0 {
        Some(overlap / (norm_f * norm_g))
    } else {
        None
    };
    if big_f + big_g == 0.0 {
        return Err(Error::ZeroPair);
    }
    let gamma_tilde = overlap * ((big_f + big_g) / 2.0).powf(-2.0 / p);
    Ok(PairParts {
        big_f,
        big_g,
        gamma,
        gamma_tilde,
    })
}

/// `(Γ, Γ̃)` for a pair of nonnegative functions.
pub fn gamma_pair(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
) -> Result<(f64, f64)> {
    gamma_pair_with(f, g, space, p, Precision::Double)
}

pub fn gamma_pair_with(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<(f64, f64)> {
    let parts = pair_parts(f, g, space, p, precision)?;
    let gamma = parts.gamma.ok_or(Error::ZeroNorm)?;
    Ok((gamma, parts.gamma_tilde))
}

/// Evaluates both sides of the main inequality and checks it in the
/// direction dictated by `p`.
pub fn main_sides(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
) -> Result<InequalityReport> {
    main_sides_with(f, g, space, p, Precision::Double)
}

pub fn main_sides_with(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<InequalityReport> {
    let parts = pair_parts(f, g, space, p, precision)?;
    let lhs = lp_functional_with(&f.sum(g)?, space, p, precision)?;
    let total = parts.big_f + parts.big_g;
    let rhs = (1.0 + parts.gamma_tilde).powf(p - 1.0) * total;
    let carbery_rhs = parts.gamma.map(|gamma| (1.0 + gamma).powf(p - 1.0) * total);
    Ok(InequalityReport::assemble(
        lhs,
        rhs,
        carbery_rhs,
        parts.gamma,
        parts.gamma_tilde,
        p,
    ))
}

/// The one-function form on a probability space: `1` against
/// `(1 + 2^{2/p}‖α(1−α)‖_{p/2}/(∫α^p+∫(1−α)^p)^{2/p})^{p−1}(∫α^p+∫(1−α)^p)`.
///
/// Feeding it the output of
/// [`reduce_to_probability`](crate::measure::reduce_to_probability) gives the
/// same verdict as [`main_sides`], with every quantity divided by its `lhs`.
pub fn reduced_sides(
    alpha: &SimpleFunction,
    prob_space: &MeasureSpace,
    p: f64,
) -> Result<InequalityReport> {
    check_probability(prob_space)?;
    let complement = alpha.map(|a| 1.0 - a)?;
    let parts = pair_parts(alpha, &complement, prob_space, p, Precision::Double)?;
    let total = parts.big_f + parts.big_g;
    let rhs = (1.0 + parts.gamma_tilde).powf(p - 1.0) * total;
    let carbery_rhs = parts.gamma.map(|gamma| (1.0 + gamma).powf(p - 1.0) * total);
    Ok(InequalityReport::assemble(
        1.0,
        rhs,
        carbery_rhs,
        parts.gamma,
        parts.gamma_tilde,
        p,
    ))
}

fn check_probability(space: &MeasureSpace) -> Result<()> {
    let sum = space.total_mass();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::NotProbabilitySpace { sum });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityKind {
    DisjointSupport,
    EqualFunctions,
    MaxRatioConstant,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityCase {
    pub kind: EqualityKind,
    /// The common value of `max{α, 1−α}` when it is constant.
    pub constant: Option<f64>,
}

/// Classifies a pair as one of the structural equality configurations.
///
/// Disjoint supports and equal functions are the two configurations where
/// the inequality is an equality for `p > 0`.
pub fn detect_equality_case(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    tol: f64,
) -> Result<EqualityCase> {
    check_aligned(f, space)?;
    check_aligned(g, space)?;
    let mut ratios = Vec::with_capacity(f.len());
    for (index, (&a, &b)) in f.values().iter().zip(g.values()).enumerate() {
        if a < 0.0 {
            return Err(Error::NegativeInput { index, value: a });
        }
        if b < 0.0 {
            return Err(Error::NegativeInput { index, value: b });
        }
        if a + b == 0.0 {
            return Err(Error::ZeroSumPoint { index });
        }
        ratios.push((a, b));
    }
    if ratios.iter().all(|&(a, b)| a * b <= tol * (a + b) * (a + b)) {
        return Ok(EqualityCase {
            kind: EqualityKind::DisjointSupport,
            constant: Some(1.0),
        });
    }
    if ratios.iter().all(|&(a, b)| (a - b).abs() <= tol * (a + b)) {
        return Ok(EqualityCase {
            kind: EqualityKind::EqualFunctions,
            constant: Some(0.5),
        });
    }
    let maxes: Vec<f64> = ratios
        .iter()
        .map(|&(a, b)| a.max(b) / (a + b))
        .collect();
    let lo = maxes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = maxes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= tol {
        return Ok(EqualityCase {
            kind: EqualityKind::MaxRatioConstant,
            constant: Some((hi + lo) / 2.0),
        });
    }
    Ok(EqualityCase {
        kind: EqualityKind::None,
        constant: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JensenDirection {
    MeanAtLeast,
    MeanAtMost,
    Equality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenReport {
    /// `B = ∫(α^p + (1−α)^p)`.
    pub b: f64,
    /// `∫H(b(α))`, which is `∫(α(1−α))^{p/2}`.
    pub mean_h: f64,
    pub h_of_b: f64,
    pub direction_expected: JensenDirection,
    pub satisfied: bool,
}

/// Compares `∫H(b(α))` with `H(B)`, where `H(b) = h(a)` for the `a ∈ [1/2,1)`
/// with `a^p + (1−a)^p = b`. `H` is convex for `p > 2` and concave for `p < 2`.
pub fn jensen_audit(alpha: &SimpleFunction, prob_space: &MeasureSpace, p: f64) -> Result<JensenReport> {
    if p == 0.0 || p == 1.0 {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "H is undefined at p = 0 and p = 1",
        });
    }
    check_aligned(alpha, prob_space)?;
    check_probability(prob_space)?;
    for (index, &value) in alpha.values().iter().enumerate() {
        let inside = if p < 0.0 {
            value > 0.0 && value < 1.0
        } else {
            (0.0..=1.0).contains(&value)
        };
        if !inside {
            return Err(Error::OutOfRangeAlpha { index, value });
        }
    }
    let mut b = 0.0;
    let mut mean_h = 0.0;
    for (&a, &w) in alpha.values().iter().zip(prob_space.weights()) {
        b += w * (a.powf(p) + (1.0 - a).powf(p));
        mean_h += w * (a * (1.0 - a)).powf(p / 2.0);
    }
    let a_of_b = invert_b(clamp_to_range(b, p), p)?;
    let h_of_b = h_of_a(a_of_b, p)?;
    let direction_expected = if p == 2.0 {
        JensenDirection::Equality
    } else if p > 2.0 {
        JensenDirection::MeanAtLeast
    } else {
        JensenDirection::MeanAtMost
    };
    let tol = 1e-10 * mean_h.abs().max(h_of_b.abs()).max(1.0);
    let satisfied = match direction_expected {
        JensenDirection::MeanAtLeast => mean_h >= h_of_b - tol,
        JensenDirection::MeanAtMost => mean_h <= h_of_b + tol,
        JensenDirection::Equality => (mean_h - h_of_b).abs() <= tol,
    };
    Ok(JensenReport {
        b,
        mean_h,
        h_of_b,
        direction_expected,
        satisfied,
    })
}

/// Rounding can push `B` a few ulps past the range of `b` on `[1/2, 1]`.
fn clamp_to_range(b: f64, p: f64) -> f64 {
    let centre = 2f64.powf(1.0 - p);
    let (lo, hi) = if p > 1.0 {
        (centre, 1.0)
    } else if p > 0.0 {
        (1.0, centre)
    } else {
        (centre, f64::INFINITY)
    };
    b.clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::reduce_to_probability;

    fn func(v: &[f64]) -> SimpleFunction {
        SimpleFunction::new(v.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn gamma_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        let (gamma, tilde) = gamma_pair(&func(&[1.0, 3.0]), &func(&[1.0, 3.0]), &two, 3.0).unwrap();
        assert!(rel(gamma, 1.0) < 1e-14 && rel(tilde, 1.0) < 1e-14);
        assert_eq!(
            gamma_pair(&func(&[1.0, 0.0]), &func(&[0.0, 1.0]), &two, 4.0).unwrap(),
            (0.0, 0.0)
        );
        let (_, tilde) = gamma_pair(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, 4.0).unwrap();
        assert!(rel(tilde, 0.685994340570035349) < 1e-14);
        assert_eq!(
            gamma_pair(&func(&[0.0, 0.0]), &func(&[0.0, 1.0]), &two, 4.0),
            Err(Error::ZeroNorm)
        );
    }

    #[test]
    fn main_sides_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        let r = main_sides(&func(&[1.0, 1.0]), &func(&[1.0, 1.0]), &two, 4.0).unwrap();
        assert!(rel(r.lhs, 32.0) < 1e-14 && rel(r.rhs, 32.0) < 1e-14 && r.satisfied);
        let r = main_sides(&func(&[1.0, 0.0]), &func(&[0.0, 1.0]), &two, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (2.0, 2.0));
        assert_eq!(r.carbery_rhs, Some(2.0));
        let r = main_sides(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, 4.0).unwrap();
        assert_eq!(r.lhs, 162.0);
        assert!(rel(r.rhs, 162.947332187264171) < 1e-13);
        assert!(r.satisfied && r.region == ExponentRegion::Forward);
        assert!(r.rhs <= r.carbery_rhs.unwrap());
    }

    #[test]
    fn reverse_region_and_zero_values() {
        let two = MeasureSpace::counting(2).unwrap();
        let r = main_sides(&func(&[2.0, 1.0]), &func(&[0.5, 2.0]), &two, 1.5).unwrap();
        assert_eq!(r.region, ExponentRegion::Reverse);
        assert!(r.satisfied && r.slack >= 0.0);
        assert!(matches!(
            main_sides(&func(&[2.0, 0.0]), &func(&[0.5, 2.0]), &two, 1.5),
            Err(Error::NonpositiveValueInReverseRegion { index: 1, .. })
        ));
        assert!(matches!(
            main_sides(&func(&[2.0, 0.0]), &func(&[0.5, 2.0]), &two, -1.0),
            Err(Error::NonpositiveValueForNegativeP { .. })
        ));
    }

    #[test]
    fn identities_at_one_and_two() {
        let space = MeasureSpace::new(vec![0.3, 1.2, 0.8]).unwrap();
        let f = func(&[0.4, 1.9, 0.0]);
        let g = func(&[1.1, 0.2, 0.7]);
        for p in [1.0, 2.0] {
            let r = main_sides(&f, &g, &space, p).unwrap();
            assert!((r.lhs - r.rhs).abs() <= 1e-12 * r.lhs, "p={p}: {r:?}");
        }
    }

    #[test]
    fn high_precision_matches() {
        let two = MeasureSpace::counting(2).unwrap();
        let r = main_sides_with(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, 4.0, Precision::High)
            .unwrap();
        assert!(rel(r.rhs, 162.947332187264171) < 1e-14);
    }

    #[test]
    fn reduction_agrees_with_direct_form() {
        let space = MeasureSpace::new(vec![0.5, 1.5, 1.0]).unwrap();
        let f = func(&[0.3, 1.7, 0.9]);
        let g = func(&[1.2, 0.4, 0.9]);
        for p in [-3.0, 0.7, 1.5, 3.0, 9.0] {
            let direct = main_sides(&f, &g, &space, p).unwrap();
            let (alpha, prob) = reduce_to_probability(&f, &g, &space, p).unwrap();
            let reduced = reduced_sides(&alpha, &prob, p).unwrap();
            assert_eq!(direct.satisfied, reduced.satisfied);
            assert!(
                (direct.relative_slack() - reduced.slack).abs() <= 1e-9 * reduced.slack.abs().max(1e-300),
                "p={p}: {} vs {}",
                direct.relative_slack(),
                reduced.slack
            );
        }
    }

    #[test]
    fn equality_cases() {
        let three = MeasureSpace::counting(3).unwrap();
        let two = MeasureSpace::counting(2).unwrap();
        let tol = DEFAULT_EQUALITY_TOL;
        let case = detect_equality_case(&func(&[1.0, 0.0, 2.0]), &func(&[0.0, 3.0, 0.0]), &three, tol).unwrap();
        assert_eq!(case.kind, EqualityKind::DisjointSupport);
        let case = detect_equality_case(&func(&[2.0, 1.0]), &func(&[2.0, 1.0]), &two, tol).unwrap();
        assert_eq!(case.kind, EqualityKind::EqualFunctions);
        let case = detect_equality_case(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, tol).unwrap();
        assert_eq!(case.kind, EqualityKind::MaxRatioConstant);
        assert!((case.constant.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let case = detect_equality_case(&func(&[1.0, 1.0]), &func(&[1.0, 2.0]), &two, tol).unwrap();
        assert_eq!(case.kind, EqualityKind::None);
        assert_eq!(
            detect_equality_case(&func(&[1.0, 0.0]), &func(&[1.0, 0.0]), &two, tol),
            Err(Error::ZeroSumPoint { index: 1 })
        );
    }

    #[test]
    fn jensen_examples() {
        let half = MeasureSpace::new(vec![0.5, 0.5]).unwrap();
        let r = jensen_audit(&func(&[0.7, 0.7]), &half, 3.0).unwrap();
        assert!((r.mean_h - r.h_of_b).abs() < 1e-13, "{r:?}");
        let r = jensen_audit(&func(&[0.9, 0.5]), &half, 3.0).unwrap();
        assert_eq!(r.direction_expected, JensenDirection::MeanAtLeast);
        assert!(r.satisfied && r.mean_h > r.h_of_b);
        assert!((r.b - 0.49).abs() < 1e-15);
        assert!((r.h_of_b - 0.17f64.powf(1.5)).abs() < 1e-13);
        let r = jensen_audit(&func(&[0.9, 0.5]), &half, 1.5).unwrap();
        assert_eq!(r.direction_expected, JensenDirection::MeanAtMost);
        assert!(r.satisfied && r.mean_h < r.h_of_b);
        let r = jensen_audit(&func(&[0.9, 0.2]), &half, 2.0).unwrap();
        assert_eq!(r.direction_expected, JensenDirection::Equality);
        assert!(r.satisfied);
        for p in [-2.0, 0.5] {
            assert!(jensen_audit(&func(&[0.9, 0.3]), &half, p).unwrap().satisfied);
        }
    }

    #[test]
    fn jensen_errors() {
        let half = MeasureSpace::new(vec![0.5, 0.5]).unwrap();
        let heavy = MeasureSpace::new(vec![0.5, 0.6]).unwrap();
        assert!(matches!(
            jensen_audit(&func(&[0.9, 0.5]), &heavy, 3.0),
            Err(Error::NotProbabilitySpace { .. })
        ));
        assert!(matches!(
            jensen_audit(&func(&[1.0, 0.5]), &half, -1.0),
            Err(Error::OutOfRangeAlpha { index: 0, .. })
        ));
        assert!(matches!(
            jensen_audit(&func(&[1.2, 0.5]), &half, 3.0),
            Err(Error::OutOfRangeAlpha { index: 0, .. })
        ));
        assert!(jensen_audit(&func(&[0.9, 0.5]), &half, 1.0).is_err());
    }
}
