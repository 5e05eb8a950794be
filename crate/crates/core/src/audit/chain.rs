//! The auxiliary functions of the derivative chain, in the variables
//! `t = ((1−α)/α)^p ∈ (0, 1]` and `c = 1/p`.
//!
//! The constant-case inequality is `f(t) ≥ 0` (or `≤ 0`) and its proof passes
//! through the signs of `f′`, `g`, `h`, `v`, `v″`, `v‴` (through `w`), and for
//! `c > 1` through `q = v″/(2c)`, `m`, `u` and `b`. Every function here is
//! evaluated together with a magnitude scale (the sum of absolute values of
//! its terms) so that callers can tell a genuine sign from rounding noise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation of `(0, 1)` used by the sign scans.
pub const DEFAULT_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainContext {
    pub p: f64,
    pub c: f64,
    /// Scans run over `(delta, 1 − delta)`.
    pub delta: f64,
}

impl ChainContext {
    pub fn from_p(p: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::ExponentOutOfRange {
                p,
                reason: "c = 1/p needs a finite nonzero p",
            });
        }
        Ok(ChainContext {
            p,
            c: 1.0 / p,
            delta: DEFAULT_DELTA,
        })
    }

    pub fn from_c(c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::ExponentOutOfRange {
                p: 1.0 / c,
                reason: "c = 1/p needs a finite nonzero c",
            });
        }
        Ok(ChainContext {
            p: 1.0 / c,
            c,
            delta: DEFAULT_DELTA,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainFunction {
    F,
    FPrime,
    G,
    H,
    /// The limit `h(0⁺)`; ignores `t`.
    H0,
    V,
    VPrime,
    VDprime,
    VTprime,
    W,
    PQuad,
    M,
    U,
    BFactor,
    QFactor,
}

impl ChainFunction {
    pub const ALL: [ChainFunction; 15] = [
        ChainFunction::F,
        ChainFunction::FPrime,
        ChainFunction::G,
        ChainFunction::H,
        ChainFunction::H0,
        ChainFunction::V,
        ChainFunction::VPrime,
        ChainFunction::VDprime,
        ChainFunction::VTprime,
        ChainFunction::W,
        ChainFunction::PQuad,
        ChainFunction::M,
        ChainFunction::U,
        ChainFunction::BFactor,
        ChainFunction::QFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChainFunction::F => "f",
            ChainFunction::FPrime => "f_prime",
            ChainFunction::G => "g",
            ChainFunction::H => "h",
            ChainFunction::H0 => "h0",
            ChainFunction::V => "v",
            ChainFunction::VPrime => "v_prime",
            ChainFunction::VDprime => "v_dprime",
            ChainFunction::VTprime => "v_tprime",
            ChainFunction::W => "w",
            ChainFunction::PQuad => "p_quad",
            ChainFunction::M => "m",
            ChainFunction::U => "u",
            ChainFunction::BFactor => "b_factor",
            ChainFunction::QFactor => "q_factor",
        }
    }

    /// Sign of the function as `t → 0⁺`, where it is known in closed form.
    pub fn left_limit_sign(self, c: f64) -> Option<i8> {
        match self {
            ChainFunction::G | ChainFunction::H => h0_sign(c),
            ChainFunction::FPrime => {
                let s = h0_sign(c)?;
                Some(if c < 1.0 { -s } else { s })
            }
            ChainFunction::F | ChainFunction::H0 => None,
            _ => leading_sign(&self.terms(c)?),
        }
    }

    /// Power-sum representation `Σ coeff·t^exponent`, for the functions that
    /// have one.
    fn terms(self, c: f64) -> Option<Vec<(f64, f64)>> {
        let c2 = c * c;
        Some(match self {
            ChainFunction::V => vec![
                (2.0 * c2 - 1.0, 1.0),
                (-c2, 2.0),
                (2.0 * c * (1.0 - 2.0 * c), c),
                (-2.0 * c * (1.0 - 2.0 * c), c + 1.0),
                (1.0 - 2.0 * c2, 2.0 * c),
                ((1.0 - c) * (1.0 - c), 1.0 + 2.0 * c),
                (-(1.0 - c) * (1.0 - c), 0.0),
                (c2, 2.0 * c - 1.0),
            ],
            ChainFunction::VPrime => vec![
                (2.0 * c2 - 1.0, 0.0),
                (-2.0 * c2, 1.0),
                (2.0 * c2 * (1.0 - 2.0 * c), c - 1.0),
                (-2.0 * c * (1.0 - 2.0 * c) * (c + 1.0), c),
                (2.0 * c * (1.0 - 2.0 * c2), 2.0 * c - 1.0),
                ((1.0 - c) * (1.0 - c) * (1.0 + 2.0 * c), 2.0 * c),
                (c2 * (2.0 * c - 1.0), 2.0 * c - 2.0),
            ],
            ChainFunction::QFactor => q_terms(c),
            ChainFunction::VDprime => q_terms(c)
                .into_iter()
                .map(|(k, e)| (2.0 * c * k, e))
                .collect(),
            ChainFunction::W => w_terms(c),
            ChainFunction::VTprime => {
                let k = 2.0 * c * (1.0 - 2.0 * c) * (c - 1.0);
                w_terms(c)
                    .into_iter()
                    .map(|(w, e)| (k * w, e + c - 3.0))
                    .collect()
            }
            ChainFunction::PQuad => vec![
                ((c + 1.0) * (1.0 + 2.0 * c), 2.0),
                (2.0 * (1.0 - 2.0 * c2), 1.0),
                (2.0 * c2 - 7.0 * c + 6.0, 0.0),
            ],
            ChainFunction::M => vec![
                (c * (2.0 - c), 1.0 - c),
                (c * (c + 1.0), 2.0 - c),
                (2.0 * (1.0 - 2.0 * c2), 1.0),
                ((c - 1.0) * (1.0 + 2.0 * c), 2.0),
                (c * (2.0 * c - 3.0), 0.0),
            ],
            ChainFunction::U => vec![
                (-c, 3.0 - 2.0 * c),
                (c * (1.0 - 2.0 * c) * (c - 1.0), 1.0 - c),
                (-c * (1.0 - 2.0 * c) * (c + 1.0), 2.0 - c),
                ((2.0 * c - 1.0) * (1.0 - 2.0 * c2), 1.0),
                ((1.0 - c) * (1.0 - c) * (1.0 + 2.0 * c), 2.0),
                (c * (2.0 * c - 1.0) * (c - 1.0), 0.0),
            ],
            ChainFunction::BFactor => vec![
                (c * c2 - c, 0.0),
                (-c * (c + 1.0) * (c - 2.0), 1.0),
                (2.0 * (2.0 * c - 3.0), 2.0 - c),
            ],
            _ => return None,
        })
    }
}

impl fmt::Display for ChainFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChainFunction::ALL
            .into_iter()
            .find(|name| name.name() == s)
            .ok_or_else(|| Error::OutOfDomain(format!("unknown chain function {s:?}")))
    }
}

fn q_terms(c: f64) -> Vec<(f64, f64)> {
    let c2 = c * c;
    vec![
        (-c, 0.0),
        (c * (1.0 - 2.0 * c) * (c - 1.0), c - 2.0),
        (-c * (1.0 - 2.0 * c) * (c + 1.0), c - 1.0),
        ((2.0 * c - 1.0) * (1.0 - 2.0 * c2), 2.0 * c - 2.0),
        ((1.0 - c) * (1.0 - c) * (1.0 + 2.0 * c), 2.0 * c - 1.0),
        (c * (2.0 * c - 1.0) * (c - 1.0), 2.0 * c - 3.0),
    ]
}

fn w_terms(c: f64) -> Vec<(f64, f64)> {
    let c2 = c * c;
    vec![
        (c * (c - 2.0), 0.0),
        (-(c + 1.0) * c, 1.0),
        (-2.0 * (1.0 - 2.0 * c2), c),
        ((1.0 - c) * (1.0 + 2.0 * c), c + 1.0),
        (-c * (2.0 * c - 3.0), c - 1.0),
    ]
}

fn sign_of(x: f64) -> Option<i8> {
    if x > 0.0 {
        Some(1)
    } else if x < 0.0 {
        Some(-1)
    } else {
        None
    }
}

/// Sign of the term with the smallest exponent, after merging equal exponents.
fn leading_sign(terms: &[(f64, f64)]) -> Option<i8> {
    let mut exponents: Vec<f64> = terms.iter().map(|&(_, e)| e).collect();
    exponents.sort_by(f64::total_cmp);
    exponents.dedup();
    let size = terms.iter().map(|&(k, _)| k.abs()).fold(0.0, f64::max);
    for e in exponents {
        let k: f64 = terms.iter().filter(|t| t.1 == e).map(|t| t.0).sum();
        if k.abs() > 1e-14 * size {
            return sign_of(k);
        }
    }
    None
}

fn h0_value(c: f64) -> f64 {
    if c < 0.0 {
        f64::NEG_INFINITY
    } else if c > 1.0 {
        f64::INFINITY
    } else {
        -2.0 * c * std::f64::consts::LN_2 - (-c).ln_1p()
    }
}

fn h0_sign(c: f64) -> Option<i8> {
    if c == 1.0 {
        return None;
    }
    sign_of(h0_value(c))
}

/// `L = (1−c)(t^c+1)(1−t)/(t^c−t)`, with its limit 2 at `t = 1`.
fn fraction(t: f64, c: f64) -> f64 {
    if t == 1.0 {
        return 2.0;
    }
    let u = t.ln();
    (1.0 - c) * (t.powf(c) + 1.0) * (-u.exp_m1()) / (t * ((c - 1.0) * u).exp_m1())
}

/// `K − 1` with `K = ((1+t)²/(4t))^c`.
fn k_minus_one(t: f64, c: f64) -> f64 {
    (c * ((1.0 - t) * (1.0 - t) / (4.0 * t)).ln_1p()).exp_m1()
}

/// The fraction `(1−c)(t^c+1)(1−t)/(t^c−t)`, which exceeds 1 on `(0, 1)`.
pub fn fraction_term(t: f64, c: f64) -> Result<f64> {
    check_t(t)?;
    if c == 1.0 {
        return Err(Error::NameRequiresC { name: "fraction", c });
    }
    Ok(fraction(t, c))
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError { t })
    }
}

/// Value of the named function at `t ∈ (0, 1]`.
pub fn chain_eval(name: ChainFunction, ctx: &ChainContext, t: f64) -> Result<f64> {
    chain_eval_scaled(name, ctx, t).map(|(value, _)| value)
}

/// Value together with the sum of absolute values of the terms that formed it.
pub fn chain_eval_scaled(name: ChainFunction, ctx: &ChainContext, t: f64) -> Result<(f64, f64)> {
    let c = ctx.c;
    if name == ChainFunction::H0 {
        if c == 1.0 {
            return Err(Error::NameRequiresC { name: "h0", c });
        }
        let v = h0_value(c);
        return Ok((v, v.abs()));
    }
    check_t(t)?;
    if let Some(terms) = name.terms(c) {
        let (mut value, mut scale) = (0.0, 0.0);
        for (k, e) in terms {
            let term = k * t.powf(e);
            value += term;
            scale += term.abs();
        }
        return Ok((value, scale));
    }
    if c == 1.0 {
        return Err(Error::NameRequiresC { name: name.name(), c });
    }
    Ok(match name {
        ChainFunction::F => {
            let terms = [
                -(t.powf(c)).ln_1p() / c,
                t.ln_1p(),
                (1.0 - c) / c * (4.0 * t / ((1.0 + t) * (1.0 + t))).powf(c).ln_1p(),
            ];
            (terms.iter().sum(), terms.iter().map(|x| x.abs()).sum())
        }
        ChainFunction::FPrime => {
            let prefactor = (1.0 - c) * (1.0 - t) / (t * (1.0 + t));
            let k = k_minus_one(t, c) + 1.0;
            let l = fraction(t, c);
            let (a, b) = (1.0 / (k + 1.0), 1.0 / l);
            (prefactor * (a - b), prefactor.abs() * (a + b))
        }
        ChainFunction::G => {
            let k = k_minus_one(t, c);
            let l = fraction(t, c);
            (k - (l - 2.0), k.abs() + l.abs() + 1.0)
        }
        ChainFunction::H => {
            let log_k = c * ((1.0 - t) * (1.0 - t) / (4.0 * t)).ln_1p();
            let log_l = (fraction(t, c) - 2.0).ln_1p();
            (log_k - log_l, log_k.abs().max(log_l.abs()).max(1.0))
        }
        _ => unreachable!("power-sum functions are handled above"),
    })
}

/// Largest `|q(t) − (t−1)(5t²−16t+8)|` over `n` uniform points of `[0, 1]`
/// (the left endpoint excluded) at `c = 2`.
pub fn q_factorization_residual(n: usize) -> Result<f64> {
    let ctx = ChainContext::from_c(2.0)?;
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let q = chain_eval(ChainFunction::QFactor, &ctx, t)?;
        let closed = (t - 1.0) * (5.0 * t * t - 16.0 * t + 8.0);
        worst = worst.max((q - closed).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(c: f64) -> ChainContext {
        ChainContext::from_c(c).unwrap()
    }

    #[test]
    fn q_factor_at_two() {
        let value = chain_eval(ChainFunction::QFactor, &ctx(2.0), 0.5).unwrap();
        assert!((value + 0.625).abs() < 1e-14);
        assert!(q_factorization_residual(1000).unwrap() <= 1e-12);
    }

    #[test]
    fn endpoint_values() {
        for c in [-3.0, -0.2, 0.3, 0.7, 2.0, 8.0] {
            let cx = ctx(c);
            for name in [ChainFunction::V, ChainFunction::VPrime, ChainFunction::VDprime] {
                assert!(chain_eval(name, &cx, 1.0).unwrap().abs() <= 1e-10, "{name} c={c}");
            }
            let expected = 2.0 * c * (1.0 - 2.0 * c) * (c - 1.0) * (c - 1.0);
            let v3 = chain_eval(ChainFunction::VTprime, &cx, 1.0).unwrap();
            assert!((v3 - expected).abs() <= 1e-8 * expected.abs());
            assert_eq!(chain_eval(ChainFunction::H, &cx, 1.0).unwrap(), 0.0);
            assert!((chain_eval(ChainFunction::W, &cx, 1.0).unwrap() - (c - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_consistency() {
        let step = 1e-6;
        for c in [-1.0, 0.3, 0.7, 3.0] {
            let cx = ctx(c);
            for i in 0..=18 {
                let t = 0.05 + 0.05 * i as f64;
                let up = chain_eval(ChainFunction::F, &cx, t + step).unwrap();
                let down = chain_eval(ChainFunction::F, &cx, t - step).unwrap();
                let numeric = (up - down) / (2.0 * step);
                let exact = chain_eval(ChainFunction::FPrime, &cx, t).unwrap();
                assert!(
                    (numeric - exact).abs() <= 1e-6 * exact.abs().max(1e-2),
                    "c={c} t={t}: {numeric} vs {exact}"
                );
            }
            for (base, derivative) in [
                (ChainFunction::V, ChainFunction::VPrime),
                (ChainFunction::VPrime, ChainFunction::VDprime),
                (ChainFunction::VDprime, ChainFunction::VTprime),
            ] {
                for t in [0.2, 0.5, 0.8] {
                    let numeric = (chain_eval(base, &cx, t + step).unwrap()
                        - chain_eval(base, &cx, t - step).unwrap())
                        / (2.0 * step);
                    let exact = chain_eval(derivative, &cx, t).unwrap();
                    assert!(
                        (numeric - exact).abs() <= 1e-5 * exact.abs().max(1.0),
                        "{derivative} c={c} t={t}: {numeric} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn prime_factors_through_g() {
        for c in [-1.0, 0.3, 0.7, 3.0] {
            let cx = ctx(c);
            for t in [0.1, 0.4, 0.9] {
                let g = chain_eval(ChainFunction::G, &cx, t).unwrap();
                let l = fraction(t, c);
                let k = g + l - 1.0;
                let rebuilt = (1.0 - c) * (1.0 - t) / (t * (1.0 + t)) * (1.0 / (k + 1.0) - 1.0 / l);
                let direct = chain_eval(ChainFunction::FPrime, &cx, t).unwrap();
                assert!((rebuilt - direct).abs() <= 1e-10 * direct.abs());
            }
        }
    }

    #[test]
    fn h0_is_the_limit_of_h() {
        for c in [0.3, 0.7] {
            let cx = ctx(c);
            let near = chain_eval(ChainFunction::H, &cx, 1e-24).unwrap();
            let limit = chain_eval(ChainFunction::H0, &cx, 0.5).unwrap();
            assert!((near - limit).abs() <= 1e-4, "c={c}: {near} vs {limit}");
        }
        assert!(chain_eval(ChainFunction::H, &ctx(-1.0), 1e-9).unwrap() < -10.0);
        assert!(chain_eval(ChainFunction::H, &ctx(1.5), 1e-9).unwrap() > 5.0);
        assert_eq!(chain_eval(ChainFunction::H0, &ctx(-1.0), 0.5).unwrap(), f64::NEG_INFINITY);
        assert_eq!(chain_eval(ChainFunction::H0, &ctx(1.5), 0.5).unwrap(), f64::INFINITY);
    }

    #[test]
    fn fraction_exceeds_one() {
        for c in [-3.0, -0.2, 0.05, 0.5, 0.9, 1.3, 8.0] {
            for i in 1..100 {
                let t = i as f64 / 100.0;
                assert!(fraction_term(t, c).unwrap() > 1.0, "c={c} t={t}");
            }
        }
    }

    #[test]
    fn errors_and_names() {
        assert_eq!(
            chain_eval(ChainFunction::V, &ctx(0.3), 0.0),
            Err(Error::DomainError { t: 0.0 })
        );
        assert!(matches!(
            chain_eval(ChainFunction::G, &ctx(1.0), 0.5),
            Err(Error::NameRequiresC { .. })
        ));
        for name in ChainFunction::ALL {
            assert_eq!(name.name().parse::<ChainFunction>().unwrap(), name);
        }
    }

    #[test]
    fn left_limits() {
        assert_eq!(ChainFunction::H.left_limit_sign(0.05), Some(-1));
        assert_eq!(ChainFunction::H.left_limit_sign(0.7), Some(1));
        assert_eq!(ChainFunction::FPrime.left_limit_sign(-1.0), Some(1));
        assert_eq!(ChainFunction::FPrime.left_limit_sign(2.0), Some(1));
        assert_eq!(ChainFunction::V.left_limit_sign(0.3), Some(1));
        assert_eq!(ChainFunction::V.left_limit_sign(0.7), Some(-1));
        assert_eq!(ChainFunction::VDprime.left_limit_sign(-1.0), Some(1));
        assert_eq!(ChainFunction::W.left_limit_sign(0.5), Some(1));
        assert_eq!(ChainFunction::W.left_limit_sign(-0.5), Some(-1));
    }
}
