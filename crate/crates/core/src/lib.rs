//! Numerical toolkit for the sharpened triangle inequality
//!
//! ```text
//! ∫|f+g|^p ≤ (1 + Γ̃)^{p−1} ∫(|f|^p + |g|^p),   Γ̃ = ‖fg‖_{p/2} ((‖f‖_p^p + ‖g‖_p^p)/2)^{−2/p}
//! ```
//!
//! on finite discrete measure spaces, which reverses for `p ∈ (−∞,0) ∪ (1,2)`.
//!
//! The crate evaluates both sides, the two-point constant-case factor and its
//! power-mean restatements, audits each auxiliary function used to establish
//! the scalar inequality (sign-change scans with bisection), checks the
//! doubling step `p → 2p` and the Schatten-norm analogue on positive
//! matrices. The `sharplp` binary wraps all of it behind a CLI.
//!
//! ```
//! use sharplp::measure::{MeasureSpace, SimpleFunction};
//! use sharplp::inequality::main_sides;
//!
//! let space = MeasureSpace::counting(2).unwrap();
//! let f = SimpleFunction::new(vec![2.0, 1.0]).unwrap();
//! let g = SimpleFunction::new(vec![1.0, 2.0]).unwrap();
//! let report = main_sides(&f, &g, &space, 4.0).unwrap();
//! assert_eq!(report.lhs, 162.0);
//! assert!(report.satisfied);
//! ```

pub mod audit;
pub mod campaign;
pub mod cli;
pub mod doubling;
pub mod error;
pub mod inequality;
pub mod means;
pub mod measure;
pub mod precision;
pub mod schatten;

pub use error::{Error, Result};
pub use measure::{ExponentRegion, MeasureSpace, SimpleFunction};
pub use precision::Precision;
