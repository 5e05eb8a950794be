//! Two-point power means, the constant-case factor and the sharpness of its
//! exponent.
//!
//! For `α ∈ [0,1]` the constant-case factor is
//!
//! ```text
//! cf(α, p, q) = (1 + R^q)^{p−1} (α^p + (1−α)^p),   R = 2(α(1−α))^{p/2} / (α^p + (1−α)^p)
//! ```
//!
//! With `q = 2/p` it is `≥ 1` for `p ∈ (0,1) ∪ (2,∞)` and `≤ 1` for
//! `p ∈ (−∞,0) ∪ (1,2)`. Writing `x = α, y = 1−α`, the same statement reads
//! `((M_p + M_{−p})/2)^{p−1} M_p` against `M_1^p` in power means.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::log_sum_exp;
use crate::precision::{HighFloat, Precision};

/// `ln cosh z` without overflow or cancellation.
fn ln_cosh(z: f64) -> f64 {
    let z = z.abs();
    if z > 20.0 {
        z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2
    } else {
        let s = (0.5 * z).sinh();
        (2.0 * s * s).ln_1p()
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveArgument(x))
    }
}

/// `M_q(x, y) = ((x^q + y^q)/2)^{1/q}`, with `M_0 = √(xy)`.
pub fn power_mean(x: f64, y: f64, q: f64) -> Result<f64> {
    power_mean_with(x, y, q, Precision::Double)
}

pub fn power_mean_with(x: f64, y: f64, q: f64, precision: Precision) -> Result<f64> {
    check_positive(x)?;
    check_positive(y)?;
    if x == y {
        return Ok(x);
    }
    match precision {
        Precision::Double => {
            // ((x^q+y^q)/2)^{1/q} = e^{m} cosh(qd)^{1/q} with m, d the log mean and half-gap.
            let (lx, ly) = (x.ln(), y.ln());
            let m = 0.5 * (lx + ly);
            if q == 0.0 {
                return Ok(m.exp());
            }
            let d = 0.5 * (lx - ly);
            Ok((m + ln_cosh(q * d) / q).exp())
        }
        Precision::High => {
            let (hx, hy) = (HighFloat::from_f64(x), HighFloat::from_f64(y));
            if q == 0.0 {
                return Ok(hx.mul(&hy).sqrt().to_f64());
            }
            let sum = hx.powf64(q).add(&hy.powf64(q));
            Ok(sum.div(&HighFloat::from_f64(2.0)).powf64(1.0 / q).to_f64())
        }
    }
}

fn check_factor_args(alpha: f64, p: f64) -> Result<()> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRangeAlpha { index: 0, value: alpha });
    }
    if p < 0.0 && (alpha == 0.0 || alpha == 1.0) {
        return Err(Error::EndpointWithNegativeP);
    }
    Ok(())
}

/// `cf(α, p, q)`, evaluated in log domain. At `α ∈ {0, 1}` with `p > 0` it
/// returns the limit `1`.
pub fn constant_factor(alpha: f64, p: f64, q_exponent: f64) -> Result<f64> {
    constant_factor_with(alpha, p, q_exponent, Precision::Double)
}

/// `cf(α, p, 2/p)`.
pub fn constant_factor_default(alpha: f64, p: f64) -> Result<f64> {
    constant_factor(alpha, p, 2.0 / p)
}

pub fn constant_factor_with(alpha: f64, p: f64, q_exponent: f64, precision: Precision) -> Result<f64> {
    check_factor_args(alpha, p)?;
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(1.0);
    }
    match precision {
        Precision::Double => {
            let la = alpha.ln();
            let lb = (-alpha).ln_1p();
            let ln_b = log_sum_exp([p * la, p * lb]);
            let ln_r = std::f64::consts::LN_2 + 0.5 * p * (la + lb) - ln_b;
            let r_q = (q_exponent * ln_r).exp();
            Ok(((p - 1.0) * r_q.ln_1p() + ln_b).exp())
        }
        Precision::High => {
            let a = HighFloat::from_f64(alpha);
            let one = HighFloat::one();
            let b_ = one.sub(&a);
            let b = a.powf64(p).add(&b_.powf64(p));
            let r = HighFloat::from_f64(2.0).mul(&a.mul(&b_).powf64(p / 2.0)).div(&b);
            let factor = one.add(&r.powf64(q_exponent)).powf64(p - 1.0);
            Ok(factor.mul(&b).to_f64())
        }
    }
}

/// Both sides of the power-mean form at `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QMeansSides {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    /// `((M_p + M_{−p})/2)^{p−1} M_p`.
    pub lhs: f64,
    /// `M_1^p`.
    pub rhs: f64,
    /// `lhs − rhs`.
    pub gap: f64,
}

/// At `(x, y) = (α, 1−α)` the gap equals `2^{−p}(cf(α,p,2/p) − 1)`.
pub fn qmeans_sides(x: f64, y: f64, p: f64) -> Result<QMeansSides> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    let mp = power_mean(x, y, p)?;
    let mm = power_mean(x, y, -p)?;
    let lhs = (0.5 * (mp + mm)).powf(p - 1.0) * mp;
    let rhs = power_mean(x, y, 1.0)?.powf(p);
    Ok(QMeansSides {
        x,
        y,
        p,
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgmChain {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    /// `p′ = p/(p−1)`.
    pub p_dual: f64,
    pub a: f64,
    pub g: f64,
    pub mp: f64,
    pub mp_dual: f64,
    /// `[1−(A/M_p)^{p′}, ½(1−(G/M_p)²), ½(1−(G/M_{p′})²), 1−(A/M_{p′})^p]`,
    /// nonincreasing and nonnegative for `p > 2`.
    pub terms: [f64; 4],
}

impl AgmChain {
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.terms.windows(2).all(|w| w[0] >= w[1] - tol) && self.terms.iter().all(|&t| t >= -tol)
    }
}

/// The improved arithmetic-geometric mean chain for `p > 2`.
pub fn agm_chain(x: f64, y: f64, p: f64) -> Result<AgmChain> {
    check_positive(x)?;
    check_positive(y)?;
    if !(p > 2.0) {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "the mean chain needs p > 2",
        });
    }
    let p_dual = p / (p - 1.0);
    let a = power_mean(x, y, 1.0)?;
    let g = power_mean(x, y, 0.0)?;
    let mp = power_mean(x, y, p)?;
    let mp_dual = power_mean(x, y, p_dual)?;
    let one_minus_pow = |ratio_ln: f64, k: f64| -(k * ratio_ln).exp_m1();
    let terms = [
        one_minus_pow(a.ln() - mp.ln(), p_dual),
        0.5 * one_minus_pow(g.ln() - mp.ln(), 2.0),
        0.5 * one_minus_pow(g.ln() - mp_dual.ln(), 2.0),
        one_minus_pow(a.ln() - mp_dual.ln(), p),
    ];
    Ok(AgmChain {
        x,
        y,
        p,
        p_dual,
        a,
        g,
        mp,
        mp_dual,
        terms,
    })
}

/// `ln η(s)` with `η(s) = ((1+√s)^p + (1−√s)^p)/2`, accurate for small `s`.
fn ln_eta(s: f64, p: f64) -> f64 {
    let r = s.sqrt();
    let (up, down) = (p * r.ln_1p(), p * (-r).ln_1p());
    if up.abs() < 1.0 && down.abs() < 1.0 {
        (0.5 * (up.exp_m1() + down.exp_m1())).ln_1p()
    } else {
        log_sum_exp([up, down]) - std::f64::consts::LN_2
    }
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("s = {s} outside [0, 1)")))
    }
}

/// `|p − 1|` below which `f_p` switches to the explicit `p = 1` limit.
pub const NEAR_ONE: f64 = 1e-6;

/// `(η(s), f_p(s))` with
/// `f_p = η^{1/(p−1)} + (1−s)η^{(2−p)/(p(p−1))} − 2`.
///
/// `f_p ≥ 0` for `p ∈ (−∞,0) ∪ (2,∞)` and `f_p ≤ 0` for `p ∈ (0,2)` is the
/// constant-case inequality after the substitution `s = (2α−1)²`.
pub fn eta_family(s: f64, p: f64) -> Result<(f64, f64)> {
    check_s(s)?;
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    let ln_eta = ln_eta(s, p);
    let eta = ln_eta.exp();
    let f = if (p - 1.0).abs() <= NEAR_ONE {
        let r = s.sqrt();
        let ln = 0.5 * (1.0 - r) * (-r).ln_1p() + 0.5 * (1.0 + r) * r.ln_1p();
        (2.0 - s) * ln.exp() - 2.0
    } else {
        let first = (ln_eta / (p - 1.0)).exp_m1();
        let second = ((-s).ln_1p() + ln_eta * (2.0 - p) / (p * (p - 1.0))).exp_m1();
        first + second
    };
    Ok((eta, f))
}

/// `g_{r,p}(s) = η^{1/(p−1)}(1 + ((1−s)/η^{2/p})^r) − 2`; equals `f_p` at `r = 1`.
pub fn g_rp(s: f64, r: f64, p: f64) -> Result<f64> {
    check_s(s)?;
    if p == 0.0 || p == 1.0 {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "g_rp needs p outside {0, 1}",
        });
    }
    let ln_eta = ln_eta(s, p);
    let first = ln_eta / (p - 1.0);
    let second = first + r * ((-s).ln_1p() - 2.0 * ln_eta / p);
    Ok(first.exp_m1() + second.exp_m1())
}

/// Steps used by the Richardson estimate of the slope at `s = 0`.
pub const SLOPE_STEPS: (f64, f64) = (1e-6, 5e-7);

/// Number of log-spaced points in the witness scan over `(0, 0.1]`.
pub const WITNESS_POINTS: usize = 200;

/// Violations smaller than this are treated as rounding.
pub const WITNESS_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessResult {
    pub p: f64,
    pub r: f64,
    /// `p(1−r)`.
    pub slope_predicted: f64,
    pub slope_measured: f64,
    /// The scanned `s` with the largest violation of the sign `g_{r,p}`
    /// would need for the inequality to hold with exponent `r·2/p`.
    pub witness_s: Option<f64>,
    pub witness_value: Option<f64>,
    /// Upper end of the violation interval that starts at `s → 0`.
    pub violation_extent: Option<f64>,
}

/// The sign `g_{r,p}` must keep: `+1` for `p > 2` or `p < 0`, `−1` on `(0, 2)`.
pub fn claimed_sign(p: f64) -> i8 {
    if !(0.0..=2.0).contains(&p) {
        1
    } else {
        -1
    }
}

/// Measures the slope of `g_{r,p}` at `0` and looks for a point near `0`
/// where the claimed sign fails.
pub fn sharpness_probe(p: f64, r: f64) -> Result<SharpnessResult> {
    if p == 0.0 || p == 1.0 || p == 2.0 {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "no sign is claimed at p = 0, 1, 2",
        });
    }
    if !(r > 0.0) {
        return Err(Error::NonpositiveArgument(r));
    }
    let g = |s: f64| g_rp(s, r, p);
    let (h1, h2) = SLOPE_STEPS;
    let slope_measured = 2.0 * g(h2)? / h2 - g(h1)? / h1;
    let sign = claimed_sign(p) as f64;
    let violation = |s: f64| -> Result<f64> { Ok(-sign * g(s)?) };

    let (lo, hi) = (1e-6f64, 0.1f64);
    let ratio = (hi / lo).ln() / (WITNESS_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..WITNESS_POINTS)
        .map(|i| if i + 1 == WITNESS_POINTS { hi } else { lo * (ratio * i as f64).exp() })
        .collect();
    let mut worst: Option<(f64, f64)> = None;
    let mut run_end: Option<usize> = None;
    let mut run_open = true;
    for (i, &s) in grid.iter().enumerate() {
        let v = violation(s)?;
        let violated = v > WITNESS_THRESHOLD;
        if violated && worst.is_none_or(|(_, w)| v > w) {
            worst = Some((s, v));
        }
        if run_open {
            if violated {
                run_end = Some(i);
            } else {
                run_open = false;
            }
        }
    }
    let violation_extent = match run_end {
        Some(i) if i + 1 == grid.len() => Some(hi),
        Some(i) => {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                if violation(mid)? > WITNESS_THRESHOLD {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Some(a)
        }
        None => None,
    };
    Ok(SharpnessResult {
        p,
        r,
        slope_predicted: p * (1.0 - r),
        slope_measured,
        witness_s: worst.map(|w| w.0),
        witness_value: worst.map(|w| -sign * w.1),
        violation_extent,
    })
}
