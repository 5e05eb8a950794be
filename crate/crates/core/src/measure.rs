//! Finite discrete measure spaces and the `L^p` functionals on them.
//!
//! A [`MeasureSpace`] is a list of strictly positive point masses and a
//! [`SimpleFunction`] is a list of real values aligned with it. For every real
//! `p != 0` we write
//!
//! ```text
//! ∫|f|^p = Σ w_i |f_i|^p        ‖f‖_p = (∫|f|^p)^{1/p}
//! ```
//!
//! which is a norm only for `p >= 1`. For `p < 0` values must be strictly
//! positive; a zero raised to a negative power is an error rather than `+∞`.
//! When `|p| > 8` each term is carried as a logarithm and summed with a
//! log-sum-exp so that exponents in the hundreds do not overflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{high_sum, HighFloat, Precision};

/// Above this `|p|` the functionals are evaluated term-by-term in log domain.
pub const LOG_DOMAIN_THRESHOLD: f64 = 8.0;

/// Finite list of positive point masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureSpace {
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(MeasureSpace { weights })
    }

    /// `n` points of unit mass.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Real values aligned with the points of a [`MeasureSpace`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleFunction {
    values: Vec<f64>,
}

impl SimpleFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        Ok(SimpleFunction { values })
    }

    pub fn constant(value: f64, n: usize) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }

    /// Pointwise product; lengths must agree.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Pointwise sum; lengths must agree.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| op(v)).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::MisalignedFunction {
                expected: self.len(),
                found: other.len(),
            });
        }
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }
}

/// Where an exponent sits relative to the direction of the main inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentRegion {
    /// `p ∈ (0,1) ∪ (2,∞)`: the inequality holds as stated.
    Forward,
    /// `p ∈ (−∞,0) ∪ (1,2)`: the inequality reverses.
    Reverse,
    BoundaryP1,
    BoundaryP2,
    UndefinedP0,
}

impl ExponentRegion {
    pub fn of(p: f64) -> Self {
        if p == 0.0 {
            ExponentRegion::UndefinedP0
        } else if p == 1.0 {
            ExponentRegion::BoundaryP1
        } else if p == 2.0 {
            ExponentRegion::BoundaryP2
        } else if p < 0.0 || (p > 1.0 && p < 2.0) {
            ExponentRegion::Reverse
        } else {
            ExponentRegion::Forward
        }
    }

    /// True when the checked inequality is `lhs >= rhs`.
    pub fn is_reversed(self) -> bool {
        self == ExponentRegion::Reverse
    }
}

pub(crate) fn check_aligned(f: &SimpleFunction, space: &MeasureSpace) -> Result<()> {
    if f.len() != space.len() {
        return Err(Error::MisalignedFunction {
            expected: space.len(),
            found: f.len(),
        });
    }
    Ok(())
}

fn check_functional_args(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<()> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    check_aligned(f, space)?;
    if p < 0.0 {
        if let Some((index, &value)) = f.values().iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::NonpositiveValueForNegativeP { index, value });
        }
    }
    Ok(())
}

fn direct_functional(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> f64 {
    f.values()
        .iter()
        .zip(space.weights())
        .map(|(&v, &w)| w * v.abs().powf(p))
        .sum()
}

/// `ln Σ w_i |f_i|^p`, or `-∞` when every term vanishes.
fn log_functional_unchecked(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> f64 {
    log_sum_exp(
        f.values()
            .iter()
            .zip(space.weights())
            .filter(|(v, _)| **v != 0.0)
            .map(|(&v, &w)| w.ln() + p * v.abs().ln()),
    )
}

/// Numerically stable `ln Σ exp(x_i)`; `-∞` for an empty input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn high_functional(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> HighFloat {
    let exponent = HighFloat::from_f64(p);
    high_sum(
        f.values()
            .iter()
            .zip(space.weights())
            .map(|(&v, &w)| HighFloat::from_f64(w).mul(&HighFloat::from_f64(v.abs()).powf(&exponent))),
    )
}

/// `∫|f|^p = Σ w_i |f_i|^p` in double precision.
pub fn lp_functional(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<f64> {
    lp_functional_with(f, space, p, Precision::Double)
}

pub fn lp_functional_with(
    f: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<f64> {
    check_functional_args(f, space, p)?;
    Ok(match precision {
        Precision::High => high_functional(f, space, p).to_f64(),
        Precision::Double if p.abs() > LOG_DOMAIN_THRESHOLD => {
            log_functional_unchecked(f, space, p).exp()
        }
        Precision::Double => direct_functional(f, space, p),
    })
}

/// `ln ∫|f|^p`, finite even where the functional itself would overflow.
pub fn log_lp_functional(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<f64> {
    check_functional_args(f, space, p)?;
    Ok(log_functional_unchecked(f, space, p))
}

/// `‖f‖_p = (∫|f|^p)^{1/p}`.
pub fn lp_norm(f: &SimpleFunction, space: &MeasureSpace, p: f64) -> Result<f64> {
    lp_norm_with(f, space, p, Precision::Double)
}

pub fn lp_norm_with(
    f: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<f64> {
    check_functional_args(f, space, p)?;
    Ok(match precision {
        Precision::High => {
            let s = high_functional(f, space, p);
            if s.is_zero() {
                0.0
            } else {
                s.powf64(1.0 / p).to_f64()
            }
        }
        Precision::Double if p.abs() > LOG_DOMAIN_THRESHOLD => {
            // exp(-∞ / p) = 0 for p > 0, which is the right limit.
            (log_functional_unchecked(f, space, p) / p).exp()
        }
        Precision::Double => {
            let s = direct_functional(f, space, p);
            if s == 0.0 {
                0.0
            } else {
                s.powf(1.0 / p)
            }
        }
    })
}

/// `‖fg‖_{p/2}`, the overlap between `f` and `g`.
pub fn overlap_norm(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
) -> Result<f64> {
    overlap_norm_with(f, g, space, p, Precision::Double)
}

pub fn overlap_norm_with(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
    precision: Precision,
) -> Result<f64> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    check_aligned(f, space)?;
    check_aligned(g, space)?;
    lp_norm_with(&f.product(g)?, space, p / 2.0, precision)
}

/// Pushes the pair `(f, g)` forward to a single ratio `α = f/(f+g)` on the
/// probability space with weights proportional to `w_i (f_i+g_i)^p`.
pub fn reduce_to_probability(
    f: &SimpleFunction,
    g: &SimpleFunction,
    space: &MeasureSpace,
    p: f64,
) -> Result<(SimpleFunction, MeasureSpace)> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    check_aligned(f, space)?;
    check_aligned(g, space)?;
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
    }
    let alpha = SimpleFunction::new(
        f.values()
            .iter()
            .zip(g.values())
            .map(|(&a, &b)| a / (a + b))
            .collect(),
    )?;
    let log_masses: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .zip(space.weights())
        .map(|((&a, &b), &w)| w.ln() + p * (a + b).ln())
        .collect();
    let top = log_masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = log_masses.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = shifted.iter().sum();
    let weights = shifted.iter().map(|w| w / total).collect();
    Ok((alpha, MeasureSpace::new(weights)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn func(v: &[f64]) -> SimpleFunction {
        SimpleFunction::new(v.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn functional_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        assert_eq!(lp_functional(&func(&[3.0, 4.0]), &two, 2.0).unwrap(), 25.0);
        assert_eq!(lp_functional(&func(&[2.0, 1.0]), &two, 4.0).unwrap(), 17.0);
        let w = MeasureSpace::new(vec![0.5, 2.0, 1.25]).unwrap();
        let c = lp_functional(&func(&[1.5; 3]), &w, 3.3).unwrap();
        assert!(rel(c, 1.5f64.powf(3.3) * 3.75) < 1e-15);
    }

    #[test]
    fn norm_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        assert_eq!(lp_norm(&func(&[3.0, 4.0]), &two, 2.0).unwrap(), 5.0);
        let n = lp_norm(&func(&[2.0, 2.0]), &two, -2.0).unwrap();
        assert!(rel(n, std::f64::consts::SQRT_2) < 1e-15);
        let n = lp_norm(&func(&[1.0, 2.0]), &two, -1.0).unwrap();
        assert!(rel(n, 2.0 / 3.0) < 1e-15);
    }

    #[test]
    fn overlap_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        assert_eq!(
            overlap_norm(&func(&[1.0, 0.0]), &func(&[0.0, 1.0]), &two, 4.0).unwrap(),
            0.0
        );
        let o = overlap_norm(&func(&[1.0, 1.0]), &func(&[1.0, 1.0]), &two, 4.0).unwrap();
        assert!(rel(o, std::f64::consts::SQRT_2) < 1e-15);
        let o = overlap_norm(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, 4.0).unwrap();
        assert!(rel(o, 2.0 * std::f64::consts::SQRT_2) < 1e-15);
    }

    #[test]
    fn error_paths() {
        let two = MeasureSpace::counting(2).unwrap();
        let three = MeasureSpace::counting(3).unwrap();
        let f = func(&[1.0, 0.0]);
        assert_eq!(lp_functional(&f, &two, 0.0), Err(Error::ZeroExponent));
        assert!(matches!(
            lp_functional(&f, &three, 2.0),
            Err(Error::MisalignedFunction { expected: 3, found: 2 })
        ));
        assert!(matches!(
            lp_norm(&f, &two, -1.0),
            Err(Error::NonpositiveValueForNegativeP { index: 1, .. })
        ));
        assert!(matches!(
            MeasureSpace::new(vec![1.0, 0.0]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
        assert_eq!(MeasureSpace::new(vec![]), Err(Error::EmptySpace));
        assert!(SimpleFunction::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn zero_values_vanish_for_positive_p() {
        let two = MeasureSpace::counting(2).unwrap();
        let z = func(&[0.0, 0.0]);
        assert_eq!(lp_norm(&z, &two, 3.0).unwrap(), 0.0);
        assert_eq!(lp_norm(&z, &two, 30.0).unwrap(), 0.0);
        assert_eq!(lp_functional(&z, &two, 30.0).unwrap(), 0.0);
    }

    #[test]
    fn log_domain_survives_huge_exponents() {
        let space = MeasureSpace::new(vec![0.3, 0.7]).unwrap();
        let f = func(&[50.0, 20.0]);
        let n = lp_norm(&f, &space, 400.0).unwrap();
        assert!(n.is_finite() && n < 50.0 && n > 49.0);
        let n = lp_norm(&f, &space, -400.0).unwrap();
        assert!(n.is_finite() && n > 20.0 && n < 21.0);
        assert!(log_lp_functional(&f, &space, 400.0).unwrap() > 700.0);
    }

    #[test]
    fn reduction_examples() {
        let two = MeasureSpace::counting(2).unwrap();
        let (a, prob) = reduce_to_probability(&func(&[1.0, 1.0]), &func(&[1.0, 1.0]), &two, 3.0).unwrap();
        assert_eq!(a.values(), &[0.5, 0.5]);
        assert_eq!(prob.weights(), &[0.5, 0.5]);
        let (a, prob) = reduce_to_probability(&func(&[1.0, 0.0]), &func(&[0.0, 1.0]), &two, 3.0).unwrap();
        assert_eq!(a.values(), &[1.0, 0.0]);
        assert_eq!(prob.weights(), &[0.5, 0.5]);
        let (a, prob) = reduce_to_probability(&func(&[2.0, 1.0]), &func(&[1.0, 2.0]), &two, 4.0).unwrap();
        assert!(rel(a.values()[0], 2.0 / 3.0) < 1e-15 && rel(a.values()[1], 1.0 / 3.0) < 1e-15);
        assert_eq!(prob.weights(), &[0.5, 0.5]);
        assert_eq!(
            reduce_to_probability(&func(&[1.0, 0.0]), &func(&[1.0, 0.0]), &two, 2.0),
            Err(Error::ZeroSumPoint { index: 1 })
        );
        assert!(matches!(
            reduce_to_probability(&func(&[1.0, -1.0]), &func(&[1.0, 2.0]), &two, 2.0),
            Err(Error::NegativeInput { index: 1, .. })
        ));
    }

    #[test]
    fn high_precision_agrees_with_double() {
        let space = MeasureSpace::new(vec![0.25, 1.5, 0.75]).unwrap();
        let f = func(&[0.3, 1.7, 2.2]);
        for p in [-3.5, -0.5, 0.5, 2.0, 4.5, 12.0] {
            let d = lp_norm(&f, &space, p).unwrap();
            let h = lp_norm_with(&f, &space, p, Precision::High).unwrap();
            assert!(rel(d, h) < 1e-14, "p={p}: {d} vs {h}");
        }
    }

    #[test]
    fn regions() {
        assert_eq!(ExponentRegion::of(0.5), ExponentRegion::Forward);
        assert_eq!(ExponentRegion::of(3.0), ExponentRegion::Forward);
        assert_eq!(ExponentRegion::of(-1.0), ExponentRegion::Reverse);
        assert_eq!(ExponentRegion::of(1.5), ExponentRegion::Reverse);
        assert_eq!(ExponentRegion::of(1.0), ExponentRegion::BoundaryP1);
        assert_eq!(ExponentRegion::of(2.0), ExponentRegion::BoundaryP2);
        assert_eq!(ExponentRegion::of(0.0), ExponentRegion::UndefinedP0);
    }

    fn positive_instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..=12).prop_flat_map(|n| {
            (
                prop::collection::vec(0.01f64..2.0, n),
                prop::collection::vec(0.01f64..2.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn norm_is_homogeneous(
            (vals, ws) in positive_instance(),
            p in prop_oneof![-20.0f64..-0.1, 0.1f64..20.0],
            lambda in 0.01f64..100.0,
        ) {
            let space = MeasureSpace::new(ws).unwrap();
            let f = SimpleFunction::new(vals).unwrap();
            let a = lp_norm(&f.scaled(lambda).unwrap(), &space, p).unwrap();
            let b = lambda * lp_norm(&f, &space, p).unwrap();
            prop_assert!(rel(a, b) < 1e-12, "{} vs {}", a, b);
        }

        #[test]
        fn log_and_direct_paths_agree(
            (vals, ws) in positive_instance(),
            p in prop_oneof![-60.0f64..-0.1, 0.1f64..60.0],
        ) {
            let space = MeasureSpace::new(ws).unwrap();
            let f = SimpleFunction::new(vals).unwrap();
            let direct = direct_functional(&f, &space, p);
            let logged = log_functional_unchecked(&f, &space, p).exp();
            prop_assume!(direct.is_finite() && direct > 0.0 && logged.is_finite());
            prop_assert!(rel(direct, logged) < 1e-12, "{} vs {}", direct, logged);
        }

        #[test]
        fn reduction_is_a_probability_space(
            (fv, ws) in positive_instance(),
            seed_g in prop::collection::vec(0.0f64..2.0, 12),
            p in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        ) {
            let n = fv.len();
            let space = MeasureSpace::new(ws).unwrap();
            let f = SimpleFunction::new(fv).unwrap();
            let g = SimpleFunction::new(seed_g[..n].to_vec()).unwrap();
            let (alpha, prob) = reduce_to_probability(&f, &g, &space, p).unwrap();
            prop_assert!((prob.total_mass() - 1.0).abs() <= 1e-14);
            prop_assert!(alpha.values().iter().all(|a| (0.0..=1.0).contains(a)));
        }
    }
}
