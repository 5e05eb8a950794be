//! The two-point quantities `b(a) = a^p + (1−a)^p` and `h(a) = (a(1−a))^{p/2}`,
//! the inverse of `b` on `[1/2, 1)`, and the hyperbolic parametrization
//! `a = e^{2x}/(1+e^{2x})` used to read off the curvature of `H = h ∘ b^{-1}`.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_a(a: f64, p: f64) -> Result<()> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfDomain(format!("a = {a} outside [0, 1]")));
    }
    if p < 0.0 && (a == 0.0 || a == 1.0) {
        return Err(Error::EndpointWithNegativeP);
    }
    Ok(())
}

/// `a^p + (1−a)^p`.
pub fn b_of_a(a: f64, p: f64) -> Result<f64> {
    check_a(a, p)?;
    Ok(a.powf(p) + (1.0 - a).powf(p))
}

/// `(a(1−a))^{p/2}`.
pub fn h_of_a(a: f64, p: f64) -> Result<f64> {
    check_a(a, p)?;
    Ok((a * (1.0 - a)).powf(p / 2.0))
}

/// Range of `b` over `a ∈ [1/2, 1)`, as `(value at 1/2, limit at 1)`.
pub fn b_range(p: f64) -> (f64, f64) {
    let centre = 2f64.powf(1.0 - p);
    let edge = if p > 0.0 { 1.0 } else { f64::INFINITY };
    (centre, edge)
}

/// The unique `a ∈ [1/2, 1)` with `b(a) = b_target`, found by bisection.
///
/// `b` is increasing on `[1/2, 1)` for `p > 1` and `p < 0`, and decreasing for
/// `p ∈ (0, 1)`. For `p > 0` the value `b_target = 1` is accepted and maps to
/// the endpoint `a = 1`.
pub fn invert_b(b_target: f64, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    if p == 1.0 {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "b is identically 1",
        });
    }
    let (centre, edge) = b_range(p);
    let increasing = !(p > 0.0 && p < 1.0);
    // b(1/2) computed through powf can land an ulp outside the exact centre.
    let b_target = if (b_target - centre).abs() <= 4.0 * f64::EPSILON * centre {
        centre
    } else {
        b_target
    };
    let inside = if increasing {
        b_target >= centre && b_target <= edge
    } else {
        b_target <= centre && b_target >= edge
    };
    if !inside || !b_target.is_finite() {
        return Err(Error::TargetOutOfRange { target: b_target, p });
    }
    if b_target == centre {
        return Ok(0.5);
    }
    if b_target == edge {
        return Ok(1.0);
    }
    let b = |a: f64| a.powf(p) + (1.0 - a).powf(p);
    let below = |a: f64| (b(a) < b_target) == increasing;
    let mut lo = 0.5;
    let mut hi = 1.0;
    if p < 0.0 {
        // b blows up at a = 1; pull the bracket in until it is finite but past the target.
        let mut k = 1;
        hi = 0.75;
        while below(hi) && k < 1000 {
            k += 1;
            hi = 1.0 - 0.5f64.powi(k + 1);
        }
    }
    let tol = 1e-14 * b_target.abs().max(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = b(mid);
        if (value - b_target).abs() <= tol {
            return Ok(mid);
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `H(b) = h(b^{-1}(b))`.
pub fn h_of_b(b: f64, p: f64) -> Result<f64> {
    h_of_a(invert_b(b, p)?, p)
}

/// Every quantity of the hyperbolic parametrization at one `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicPoint {
    pub x: f64,
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub db_dx: f64,
    pub dh_dx: f64,
    /// `dH/db`; absent at `x = 0`, where both derivatives vanish.
    pub dh_db: Option<f64>,
    pub ddx_dh_db: Option<f64>,
    pub d2h_db2: Option<f64>,
}

/// `ln(2 cosh z)` without overflow.
fn ln_two_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p()
}

/// Evaluates `a, b, h` and their derivatives at `x ≥ 0`.
pub fn hyperbolic_point(x: f64, p: f64) -> Result<HyperbolicPoint> {
    if p == 0.0 {
        return Err(Error::ZeroExponent);
    }
    if p == 1.0 {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "b is constant in x",
        });
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::OutOfDomain(format!("x = {x} must be finite and >= 0")));
    }
    let a = 1.0 / (1.0 + (-2.0 * x).exp());
    let ln_denominator = p * ln_two_cosh(x);
    let h = (-ln_denominator).exp();
    let b = (ln_two_cosh(p * x) - ln_denominator).exp();
    let s = ((p - 1.0) * x).sinh();
    let db_dx = (1.0 - p) * std::f64::consts::LN_2;
    let db_dx = p * s * (db_dx - (p + 1.0) * x.cosh().ln()).exp();
    let dh_dx = -p * x.tanh() * h;
    let (dh_db, ddx_dh_db, d2h_db2) = if x == 0.0 {
        (None, None, None)
    } else {
        let dh_db = -x.sinh() / (2.0 * s);
        let tq = ((p - 1.0) * x).tanh();
        let ddx = x.cosh() * tanh_gap(p - 1.0, x) / (2.0 * s * tq);
        (Some(dh_db), Some(ddx), Some(ddx / db_dx))
    };
    Ok(HyperbolicPoint {
        x,
        p,
        a,
        b,
        h,
        db_dx,
        dh_dx,
        dh_db,
        ddx_dh_db,
        d2h_db2,
    })
}

/// `lim_{x→0⁺} dH/db = −1/(2(p−1))`.
pub fn dh_db_at_zero(p: f64) -> f64 {
    -1.0 / (2.0 * (p - 1.0))
}

/// `t·tanh x − tanh(t x)`: positive for `t > 1` or `−1 < t < 0`, negative for
/// `0 < t < 1` or `t < −1`, zero at `t ∈ {−1, 0, 1}`.
pub fn tanh_gap(t: f64, x: f64) -> f64 {
    t * x.tanh() - (t * x).tanh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Convex,
    Concave,
    Mixed,
}

/// One column of the table of signs behind the curvature of `H`, observed on
/// a grid of `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureColumn {
    pub p: f64,
    /// Sign of `db/dx` on the grid, or 0 if it is not constant.
    pub db_dx_sign: i8,
    pub ddx_dh_db_sign: i8,
    pub observed: Curvature,
    pub expected: Curvature,
    pub matched: bool,
}

fn constant_sign(values: &[f64]) -> i8 {
    if values.iter().all(|&v| v > 0.0) {
        1
    } else if values.iter().all(|&v| v < 0.0) {
        -1
    } else {
        0
    }
}

/// `H` is strictly convex for `p > 2` and strictly concave for `p < 2`.
pub fn expected_curvature(p: f64) -> Curvature {
    if p > 2.0 {
        Curvature::Convex
    } else {
        Curvature::Concave
    }
}

/// Reads the signs of `db/dx`, `d/dx(dH/db)` and `d²H/db²` over the given
/// `x > 0` and compares the curvature with [`expected_curvature`].
pub fn curvature_column(p: f64, xs: &[f64]) -> Result<CurvatureColumn> {
    let mut db = Vec::with_capacity(xs.len());
    let mut ddx = Vec::with_capacity(xs.len());
    let mut second = Vec::with_capacity(xs.len());
    for &x in xs {
        if x <= 0.0 {
            return Err(Error::SingularPoint { x });
        }
        let point = hyperbolic_point(x, p)?;
        db.push(point.db_dx);
        ddx.push(point.ddx_dh_db.unwrap_or(f64::NAN));
        second.push(point.d2h_db2.unwrap_or(f64::NAN));
    }
    let observed = match constant_sign(&second) {
        1 => Curvature::Convex,
        -1 => Curvature::Concave,
        _ => Curvature::Mixed,
    };
    let expected = expected_curvature(p);
    Ok(CurvatureColumn {
        p,
        db_dx_sign: constant_sign(&db),
        ddx_dh_db_sign: constant_sign(&ddx),
        observed,
        expected,
        matched: observed == expected,
    })
}
