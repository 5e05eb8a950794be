//! Evaluation precision.
//!
//! Every operation that reduces to sums of powers has a double-precision path
//! (the default) and a high-precision path carried out in 192-bit binary
//! floating point, which is a little over 57 significant decimal digits. Both
//! paths return `f64`; the high path rounds once at the end.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

/// Environment variable consulted by [`Precision::from_env`].
pub const PRECISION_ENV: &str = "SHARPLP_PRECISION";

/// Working precision of the high path, in bits.
pub const HIGH_PRECISION_BITS: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

/// Which arithmetic an operation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    High,
}

impl Precision {
    /// Parses `double` or `high` (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" | "" => Ok(Precision::Double),
            "high" => Ok(Precision::High),
            other => Err(Error::UnknownPrecision(other.to_string())),
        }
    }

    /// Reads `SHARPLP_PRECISION`; unset means double precision.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Precision::Double),
        }
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A 192-bit float used by the high-precision paths.
#[derive(Debug, Clone)]
pub struct HighFloat(BigFloat);

impl HighFloat {
    pub fn from_f64(x: f64) -> Self {
        HighFloat(BigFloat::from_f64(x, HIGH_PRECISION_BITS))
    }

    pub fn zero() -> Self {
        Self::from_f64(0.0)
    }

    pub fn one() -> Self {
        Self::from_f64(1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        HighFloat(self.0.add(&other.0, HIGH_PRECISION_BITS, RM))
    }

    pub fn sub(&self, other: &Self) -> Self {
        HighFloat(self.0.sub(&other.0, HIGH_PRECISION_BITS, RM))
    }

    pub fn mul(&self, other: &Self) -> Self {
        HighFloat(self.0.mul(&other.0, HIGH_PRECISION_BITS, RM))
    }

    pub fn div(&self, other: &Self) -> Self {
        HighFloat(self.0.div(&other.0, HIGH_PRECISION_BITS, RM))
    }

    pub fn abs(&self) -> Self {
        HighFloat(self.0.abs())
    }

    pub fn ln(&self) -> Self {
        with_consts(|cc| HighFloat(self.0.ln(HIGH_PRECISION_BITS, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        with_consts(|cc| HighFloat(self.0.exp(HIGH_PRECISION_BITS, RM, cc)))
    }

    pub fn sqrt(&self) -> Self {
        HighFloat(self.0.sqrt(HIGH_PRECISION_BITS, RM))
    }

    /// `self^e` for `self >= 0`, with `0^e = 0` for `e > 0`.
    pub fn powf(&self, e: &Self) -> Self {
        if self.is_zero() {
            return match e.0.cmp(&BigFloat::from_f64(0.0, HIGH_PRECISION_BITS)) {
                Some(0) => Self::one(),
                Some(x) if x > 0 => Self::zero(),
                _ => HighFloat(BigFloat::from_f64(f64::INFINITY, HIGH_PRECISION_BITS)),
            };
        }
        self.ln().mul(e).exp()
    }

    pub fn powf64(&self, e: f64) -> Self {
        self.powf(&Self::from_f64(e))
    }

    pub fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }

    /// Rounds to the nearest `f64` by way of the decimal expansion.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse::<f64>().unwrap_or(f64::NAN)
    }
}

impl From<f64> for HighFloat {
    fn from(x: f64) -> Self {
        HighFloat::from_f64(x)
    }
}

/// Sums an iterator of high-precision values.
pub fn high_sum<I: IntoIterator<Item = HighFloat>>(items: I) -> HighFloat {
    items.into_iter().fold(HighFloat::zero(), |acc, x| acc.add(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_modes() {
        assert_eq!(Precision::parse("double").unwrap(), Precision::Double);
        assert_eq!(Precision::parse("HIGH").unwrap(), Precision::High);
        assert!(Precision::parse("quad").is_err());
    }

    #[test]
    fn high_float_round_trips_and_computes() {
        let two = HighFloat::from_f64(2.0);
        assert_eq!(two.sqrt().to_f64(), std::f64::consts::SQRT_2);
        assert_eq!(two.ln().to_f64(), std::f64::consts::LN_2);
        assert_eq!(HighFloat::from_f64(3.0).powf64(4.0).to_f64(), 81.0);
        assert_eq!(HighFloat::zero().powf64(2.5).to_f64(), 0.0);
        assert_eq!(HighFloat::from_f64(-0.125).to_f64(), -0.125);
    }

    #[test]
    fn carries_more_digits_than_double() {
        // (1 + 2^-60) - 1 vanishes in f64 but not at 192 bits.
        let tiny = HighFloat::from_f64(2f64.powi(-60));
        let x = HighFloat::one().add(&tiny).sub(&HighFloat::one());
        assert_eq!(x.to_f64(), 2f64.powi(-60));
    }
}
