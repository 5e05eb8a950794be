//! Numerical audit of the argument behind the scalar inequality.
//!
//! * [`pair`]: `b`, `h`, the inverse of `b`, and the curvature of
//!   `H = h ∘ b^{-1}` through the hyperbolic parametrization.
//! * [`chain`]: the functions `f, f′, g, h, v, …` in the variables `t, c`.
//! * [`signs`]: the sign-change scanner.
//!
//! [`audit_chain`] compares observed sign patterns with the ones the argument
//! needs for a given `c = 1/p`.

pub mod chain;
pub mod pair;
pub mod signs;

use serde::Serialize;

pub use chain::{chain_eval, chain_eval_scaled, ChainContext, ChainFunction};
pub use pair::{b_of_a, h_of_a, h_of_b, hyperbolic_point, invert_b, tanh_gap, HyperbolicPoint};
pub use signs::{PatternKind, SignChangePattern};

use crate::error::{Error, Result};

/// Default number of grid points for [`audit_chain`].
pub const DEFAULT_GRID: usize = 10_000;

/// Scans `(δ, 1−δ)` for sign changes of one chain function.
pub fn sign_changes(name: ChainFunction, ctx: &ChainContext, grid_size: usize) -> Result<SignChangePattern> {
    if name == ChainFunction::H0 {
        return Err(Error::OutOfDomain("h0 is a constant and has no sign pattern".into()));
    }
    signs::scan(
        |t| chain_eval_scaled(name, ctx, t),
        ctx.delta,
        1.0 - ctx.delta,
        grid_size,
        name.left_limit_sign(ctx.c),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainEntry {
    pub name: ChainFunction,
    pub observed: SignChangePattern,
    pub expected: PatternKind,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub c: f64,
    pub p: f64,
    /// `f′, g, h, v, v″` against the patterns the argument requires.
    pub entries: Vec<ChainEntry>,
    /// Intermediate functions, checked only for the `c` where the argument
    /// uses them.
    pub informational: Vec<ChainEntry>,
    /// The fraction `(1−c)(t^c+1)(1−t)/(t^c−t)` exceeds 1 on the whole grid.
    pub fraction_exceeds_one: bool,
    pub endpoints: EndpointIdentities,
}

impl ChainReport {
    /// All gated patterns match and the fraction check holds.
    pub fn all_match(&self) -> bool {
        self.fraction_exceeds_one && self.entries.iter().all(|e| e.matched)
    }

    pub fn entry(&self, name: ChainFunction) -> Option<&ChainEntry> {
        self.entries
            .iter()
            .chain(&self.informational)
            .find(|e| e.name == name)
    }
}

/// Patterns of `f′, g, h, v, v″` required by the argument at this `c`.
pub fn expected_patterns(c: f64) -> Result<[(ChainFunction, PatternKind); 5]> {
    if c == 0.0 || c == 0.5 || c == 1.0 || !c.is_finite() {
        return Err(Error::ExponentOutOfRange {
            p: 1.0 / c,
            reason: "no sign pattern is claimed at p = 1 or p = 2",
        });
    }
    use PatternKind::*;
    let (fp, gh, v) = if c < 0.0 {
        (Positive, Negative, Positive)
    } else if c < 0.5 {
        (PlusToMinus, MinusToPlus, PlusToMinus)
    } else if c < 1.0 {
        (MinusToPlus, PlusToMinus, MinusToPlus)
    } else {
        (PlusToMinus, PlusToMinus, MinusToPlus)
    };
    Ok([
        (ChainFunction::FPrime, fp),
        (ChainFunction::G, gh),
        (ChainFunction::H, gh),
        (ChainFunction::V, v),
        (ChainFunction::VDprime, v),
    ])
}

/// Patterns of the intermediate functions, for the `c` where they are used.
pub fn informational_patterns(c: f64) -> Vec<(ChainFunction, PatternKind)> {
    use PatternKind::*;
    let mut out = Vec::new();
    if c > 0.0 && c < 1.0 {
        out.push((ChainFunction::W, PlusToMinus));
    } else if c < 0.0 {
        out.push((ChainFunction::W, Negative));
    }
    if c < 1.0 {
        out.push((ChainFunction::PQuad, Positive));
    }
    if c > 1.0 && c < 2.0 {
        out.push((ChainFunction::M, PlusToMinus));
    }
    if c > 2.0 {
        out.push((ChainFunction::U, MinusToPlus));
        out.push((ChainFunction::BFactor, Positive));
    }
    out
}

fn entry(name: ChainFunction, expected: PatternKind, ctx: &ChainContext, grid_size: usize) -> Result<ChainEntry> {
    let observed = sign_changes(name, ctx, grid_size)?;
    let matched = observed.overall == expected;
    Ok(ChainEntry {
        name,
        observed,
        expected,
        matched,
    })
}

/// Runs every scan for one `c` and compares against the required patterns.
pub fn audit_chain(ctx: &ChainContext, grid_size: usize) -> Result<ChainReport> {
    let expected = expected_patterns(ctx.c)?;
    let entries = expected
        .iter()
        .map(|&(name, pattern)| entry(name, pattern, ctx, grid_size))
        .collect::<Result<Vec<_>>>()?;
    let informational = informational_patterns(ctx.c)
        .into_iter()
        .map(|(name, pattern)| entry(name, pattern, ctx, grid_size))
        .collect::<Result<Vec<_>>>()?;
    let step = (1.0 - 2.0 * ctx.delta) / (grid_size - 1) as f64;
    let mut fraction_exceeds_one = true;
    for i in 0..grid_size {
        let t = ctx.delta + step * i as f64;
        if chain::fraction_term(t, ctx.c)? <= 1.0 {
            fraction_exceeds_one = false;
            break;
        }
    }
    Ok(ChainReport {
        c: ctx.c,
        p: ctx.p,
        entries,
        informational,
        fraction_exceeds_one,
        endpoints: endpoint_identities(ctx)?,
    })
}

/// Values at `t = 1` that the argument relies on, next to their closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointIdentities {
    pub v: f64,
    pub v_prime: f64,
    pub v_dprime: f64,
    pub v_tprime: f64,
    /// `2c(1−2c)(c−1)²`.
    pub v_tprime_expected: f64,
    pub h: Option<f64>,
    pub w: f64,
    /// `c − 1`.
    pub w_expected: f64,
}

impl EndpointIdentities {
    /// `v, v′, v″` vanish to `1e−10`, `v‴` and `w` match to `1e−8` relative
    /// and `h(1) = 0`.
    pub fn hold(&self) -> bool {
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-8 * b.abs().max(f64::MIN_POSITIVE);
        [self.v, self.v_prime, self.v_dprime].iter().all(|x| x.abs() <= 1e-10)
            && (rel(self.v_tprime, self.v_tprime_expected) || self.v_tprime_expected == 0.0 && self.v_tprime.abs() <= 1e-10)
            && self.h.is_none_or(|h| h.abs() <= 1e-12)
            && (self.w - self.w_expected).abs() <= 1e-12 * self.w_expected.abs().max(1.0)
    }
}

pub fn endpoint_identities(ctx: &ChainContext) -> Result<EndpointIdentities> {
    let c = ctx.c;
    let at_one = |name| chain_eval(name, ctx, 1.0);
    Ok(EndpointIdentities {
        v: at_one(ChainFunction::V)?,
        v_prime: at_one(ChainFunction::VPrime)?,
        v_dprime: at_one(ChainFunction::VDprime)?,
        v_tprime: at_one(ChainFunction::VTprime)?,
        v_tprime_expected: 2.0 * c * (1.0 - 2.0 * c) * (c - 1.0) * (c - 1.0),
        h: if c == 1.0 { None } else { Some(at_one(ChainFunction::H)?) },
        w: at_one(ChainFunction::W)?,
        w_expected: c - 1.0,
    })
}
