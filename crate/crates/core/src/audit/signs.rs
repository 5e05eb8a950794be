//! Sign-change detection on an interval: uniform scan, bracketing,
//! bisection, and classification of the resulting pattern.

use serde::Serialize;

use crate::error::{Error, Result};

/// Samples with `|value| ≤ ZERO_THRESHOLD · scale` carry no sign.
pub const ZERO_THRESHOLD: f64 = 1e-13;

/// Width to which every bracket is refined.
pub const BRACKET_WIDTH: f64 = 1e-10;

/// Smallest grid accepted by [`scan`].
pub const MIN_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    Positive,
    Negative,
    PlusToMinus,
    MinusToPlus,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub sign_before: i8,
    pub sign_after: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChangePattern {
    pub crossings: Vec<Crossing>,
    pub overall: PatternKind,
}

impl SignChangePattern {
    fn classify(first: Option<i8>, crossings: &[Crossing]) -> PatternKind {
        match (first, crossings) {
            (Some(1), []) => PatternKind::Positive,
            (Some(-1), []) => PatternKind::Negative,
            (_, [only]) if only.sign_before == 1 => PatternKind::PlusToMinus,
            (_, [_]) => PatternKind::MinusToPlus,
            _ => PatternKind::Other,
        }
    }
}

fn classify_sample(value: f64, scale: f64) -> i8 {
    if !value.is_finite() {
        return if value == f64::INFINITY {
            1
        } else if value == f64::NEG_INFINITY {
            -1
        } else {
            0
        };
    }
    if value.abs() <= ZERO_THRESHOLD * scale {
        0
    } else if value > 0.0 {
        1
    } else {
        -1
    }
}

/// Bisects `[lo, hi]`, where `positive(lo) != positive(hi)`, down to
/// [`BRACKET_WIDTH`]. With `geometric` the midpoint is taken in `ln t`, which
/// keeps tiny brackets meaningful.
fn bisect(
    eval: &impl Fn(f64) -> Result<(f64, f64)>,
    mut lo: f64,
    mut hi: f64,
    geometric: bool,
) -> Result<(f64, f64)> {
    let lo_positive = eval(lo)?.0 > 0.0;
    for _ in 0..400 {
        let width_ok = if geometric {
            hi - lo <= BRACKET_WIDTH * hi
        } else {
            hi - lo <= BRACKET_WIDTH
        };
        if width_ok {
            break;
        }
        let mid = if geometric { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if (eval(mid)?.0 > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Scans `eval` over `grid_size` uniform points of `[lo, hi]` and reports
/// every sign change.
///
/// `eval` returns a value and the magnitude scale it was formed from. When
/// `left_limit` is the known sign of the function as `t → 0⁺` and the first
/// resolved sample disagrees with it, the scan continues below `lo` along
/// `lo·10^{−k}` to locate the extra crossing.
pub fn scan(
    eval: impl Fn(f64) -> Result<(f64, f64)>,
    lo: f64,
    hi: f64,
    grid_size: usize,
    left_limit: Option<i8>,
) -> Result<SignChangePattern> {
    if grid_size < MIN_GRID {
        return Err(Error::TooCoarse(format!(
            "grid of {grid_size} points, at least {MIN_GRID} needed"
        )));
    }
    let step = (hi - lo) / (grid_size - 1) as f64;
    let mut samples = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let t = if i + 1 == grid_size { hi } else { lo + step * i as f64 };
        let (value, scale) = eval(t)?;
        samples.push((t, classify_sample(value, scale)));
    }

    let mut crossings = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    let mut zero_run = 0usize;
    for &(t, sign) in &samples {
        if sign == 0 {
            zero_run += 1;
            continue;
        }
        if let Some((t_prev, s_prev)) = last {
            if s_prev != sign {
                if zero_run >= 2 {
                    return Err(Error::TooCoarse(format!(
                        "{zero_run} unresolved samples between opposite signs on [{t_prev}, {t}]"
                    )));
                }
                let (a, b) = bisect(&eval, t_prev, t, false)?;
                crossings.push(Crossing {
                    bracket_lo: a,
                    bracket_hi: b,
                    sign_before: s_prev,
                    sign_after: sign,
                });
            }
        }
        last = Some((t, sign));
        zero_run = 0;
    }

    let first = samples.iter().map(|s| s.1).find(|&s| s != 0);
    let mut first_sign = first;
    if let (Some(limit), Some(resolved)) = (left_limit, first) {
        if limit != resolved {
            if let Some(crossing) = search_below(&eval, lo, limit, resolved)? {
                crossings.insert(0, crossing);
                first_sign = Some(limit);
            }
        }
    }
    let overall = SignChangePattern::classify(first_sign, &crossings);
    Ok(SignChangePattern { crossings, overall })
}

fn search_below(
    eval: &impl Fn(f64) -> Result<(f64, f64)>,
    lo: f64,
    limit: i8,
    resolved: i8,
) -> Result<Option<Crossing>> {
    let mut upper = lo;
    for k in 1..=300 {
        let t = lo * 10f64.powi(-k);
        if t < f64::MIN_POSITIVE {
            break;
        }
        let (value, scale) = eval(t)?;
        match classify_sample(value, scale) {
            s if s == limit => {
                let (a, b) = bisect(eval, t, upper, true)?;
                return Ok(Some(Crossing {
                    bracket_lo: a,
                    bracket_hi: b,
                    sign_before: limit,
                    sign_after: resolved,
                }));
            }
            s if s == resolved => upper = t,
            _ => {}
        }
    }
    Ok(None)
}
