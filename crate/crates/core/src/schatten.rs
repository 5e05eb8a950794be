//! Schatten norms of positive semidefinite matrices and the matrix analogue
//! of the sharpened triangle inequality,
//!
//! ```text
//! tr(A+B)^p ≤ (1 + (tr[B^{p/4}A^{p/2}B^{p/4}] / (½‖A‖_p^p + ½‖B‖_p^p))^{2/p})^{p−1} tr(A^p + B^p),
//! ```
//!
//! an identity at `p = 2` and established for `p = 2^k` by doubling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::doubling::{Direction, Link};
use crate::error::{Error, Result};
use crate::inequality::RELATIVE_SLACK;

/// Largest accepted dimension.
pub const MAX_DIM: usize = 64;

/// Relative tolerance on `A − A*`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues down to `−PSD_TOL · ‖A‖` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

/// A Hermitian positive semidefinite matrix with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    entries: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

impl PsdMatrix {
    /// Validates Hermitian symmetry and positivity, then diagonalizes.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() {
            return Err(Error::DimensionMismatch(entries.nrows(), entries.ncols()));
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimOutOfRange { dim });
        }
        let size = max_abs(&entries);
        let residue = max_abs(&(&entries - entries.adjoint()));
        if residue > HERMITIAN_TOL * size.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian {
                residue: residue / size,
            });
        }
        let eig = hermitian_part(&entries).symmetric_eigen();
        let spectral = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL * spectral {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(PsdMatrix {
            entries,
            eigenvalues: eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Result<Self> {
        let n = diagonal.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diagonal[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_real_diagonal(&vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Eigenvalues in the order of the decomposition, clamped at zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `A^s` through the spectral decomposition, with `0^s = 0`.
    pub fn power(&self, s: f64) -> CMatrix {
        let v = &self.eigenvectors;
        let scaled = CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            let l = self.eigenvalues[j];
            let w = if l > 0.0 { l.powf(s) } else { 0.0 };
            v[(i, j)] * w
        });
        scaled * v.adjoint()
    }

    /// `tr A^s = Σ λ^s`.
    pub fn trace_power(&self, s: f64) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|l| l.powf(s))
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(&self.entries * Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Self::new(&self.entries + &other.entries)
    }

    pub fn square(&self) -> Result<Self> {
        Self::new(hermitian_part(&(&self.entries * &self.entries)))
    }
}

fn check_dims(a: &PsdMatrix, b: &PsdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// Deterministic per `(dim, seed)`: `G G*` with `G` a matrix of standard
/// complex normal entries.
pub fn random_psd(dim: usize, seed: u64) -> Result<PsdMatrix> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimOutOfRange { dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re * scale, im * scale));
    }
    let g = CMatrix::from_vec(dim, dim, entries);
    PsdMatrix::new(hermitian_part(&(&g * g.adjoint())))
}

/// `‖A‖_p = (Σ λ^p)^{1/p}` for `p ≥ 1`.
pub fn schatten_norm(a: &PsdMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "Schatten norms need p >= 1",
        });
    }
    Ok(a.trace_power(p).powf(1.0 / p))
}

/// Schatten `p`-norm of a Hermitian matrix that need not be positive.
pub fn hermitian_schatten_norm(m: &CMatrix, p: f64) -> f64 {
    let eig = hermitian_part(m).symmetric_eigen();
    eig.eigenvalues
        .iter()
        .map(|l| l.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

fn real_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

/// `tr[B^{p/4} A^{p/2} B^{p/4}]`.
pub fn mixed_trace(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<f64> {
    check_dims(a, b)?;
    if !(p > 0.0) {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "the mixed trace needs p > 0",
        });
    }
    let bq = b.power(p / 4.0);
    Ok(real_trace(&(&bq * a.power(p / 2.0) * &bq)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchattenReport {
    pub p: f64,
    /// `tr(A+B)^p`.
    pub lhs: f64,
    pub rhs: f64,
    pub mixed_trace: f64,
    pub satisfied: bool,
    /// `rhs − lhs`.
    pub slack: f64,
    /// Set when `p` is not a power of two, where no bound is established.
    pub conjectural: bool,
}

fn is_dyadic(p: f64) -> bool {
    if !(p >= 2.0) || p.fract() != 0.0 || p > 2f64.powi(62) {
        return false;
    }
    (p as u64).is_power_of_two()
}

fn evaluate(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<SchattenReport> {
    check_dims(a, b)?;
    let sum = a.add(b)?;
    let lhs = sum.trace_power(p);
    let (ta, tb) = (a.trace_power(p), b.trace_power(p));
    if ta + tb == 0.0 {
        return Err(Error::ZeroPair);
    }
    let mixed = mixed_trace(a, b, p)?;
    let ratio = (mixed / (0.5 * ta + 0.5 * tb)).max(0.0);
    let rhs = (1.0 + ratio.powf(2.0 / p)).powf(p - 1.0) * (ta + tb);
    let slack = rhs - lhs;
    Ok(SchattenReport {
        p,
        lhs,
        rhs,
        mixed_trace: mixed,
        satisfied: slack >= -RELATIVE_SLACK * lhs.abs().max(rhs.abs()),
        slack,
        conjectural: !is_dyadic(p),
    })
}

/// Checks the trace inequality at `p = 2^k`, `k ≥ 1`.
pub fn schatten_verify(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<SchattenReport> {
    if !is_dyadic(p) {
        return Err(Error::UnsupportedExponent { p });
    }
    evaluate(a, b, p)
}

/// Evaluates both sides at any `p > 1`; results off `p = 2^k` are labelled
/// conjectural.
pub fn schatten_explore(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<SchattenReport> {
    if !(p > 1.0) {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "exploration covers p > 1",
        });
    }
    evaluate(a, b, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiebThirring {
    /// `tr[(B A² B)^{p/2}] = ‖AB‖_p^p`.
    pub lhs: f64,
    /// `tr[B^{p/2} A^p B^{p/2}]`.
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `tr[(BA²B)^{p/2}] ≤ tr[B^{p/2}A^pB^{p/2}]`.
pub fn lieb_thirring_check(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<LiebThirring> {
    check_dims(a, b)?;
    if !(p >= 1.0) {
        return Err(Error::ExponentOutOfRange {
            p,
            reason: "the trace inequality is used for p >= 1",
        });
    }
    let (ae, be) = (a.entries(), b.entries());
    let inner = PsdMatrix::new(hermitian_part(&(be * ae * ae * be)))?;
    let lhs = inner.trace_power(p / 2.0);
    let bh = b.power(p / 2.0);
    let rhs = real_trace(&(&bh * a.power(p) * &bh));
    Ok(LiebThirring {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + RELATIVE_SLACK),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchattenDoublingReport {
    pub p: f64,
    /// Factor applied to reach `‖A‖_{2p}^{2p} + ‖B‖_{2p}^{2p} = 2`.
    pub scale: f64,
    /// `(tr[B^{p/2}A^pB^{p/2}])^{1/p}`.
    pub gamma: f64,
    /// `‖A² + B²‖_p`.
    pub beta: f64,
    /// `‖(AB + BA)/2‖_p`.
    pub x_norm: f64,
    /// `2^{1/p}(1+γ)^{2−1/p}`; its `p`-th power is the normalized right side
    /// of the trace inequality at `2p`.
    pub final_bound: f64,
    pub links: Vec<Link>,
}

impl SchattenDoublingReport {
    pub fn all_links_hold(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

/// Checks every link of the step from `p` to `2p` on one pair.
pub fn schatten_doubling(a: &PsdMatrix, b: &PsdMatrix, p: f64) -> Result<SchattenDoublingReport> {
    if !is_dyadic(p) {
        return Err(Error::UnsupportedExponent { p });
    }
    check_dims(a, b)?;
    let total = a.trace_power(2.0 * p) + b.trace_power(2.0 * p);
    if total == 0.0 {
        return Err(Error::ZeroPair);
    }
    let scale = (total / 2.0).powf(-1.0 / (2.0 * p));
    let (a, b) = (a.scaled(scale)?, b.scaled(scale)?);
    let (ae, be) = (a.entries(), b.entries());
    let x = (ae * be + be * ae) * Complex64::new(0.5, 0.0);
    let x_norm = hermitian_schatten_norm(&x, p);
    let (a2, b2) = (a.square()?, b.square()?);
    let y = a2.add(&b2)?;
    let beta = schatten_norm(&y, p)?;
    let ab = lieb_thirring_check(&a, &b, p)?;
    let ba = lieb_thirring_check(&b, &a, p)?;
    let (ab_norm, ba_norm) = (ab.lhs.powf(1.0 / p), ba.lhs.powf(1.0 / p));
    let gamma = ab.rhs.max(0.0).powf(1.0 / p);
    let lhs = schatten_norm(&a.add(&b)?, 2.0 * p)?.powi(2);
    let at_p = evaluate(&a2, &b2, p)?;
    let two_root = 2f64.powf(1.0 / p);
    let middle = two_root * (1.0 + gamma * gamma).powf(1.0 - 1.0 / p) + 2.0 * gamma;
    let final_bound = two_root * (1.0 + gamma).powf(2.0 - 1.0 / p);
    let links = vec![
        Link::new("triangle", lhs, beta + 2.0 * x_norm, Direction::AtMost),
        Link::new("x_split", x_norm, 0.5 * (ab_norm + ba_norm), Direction::AtMost),
        Link::new("lieb_thirring", ab.lhs, ab.rhs, Direction::AtMost),
        Link::new("trace_inequality_at_p", at_p.lhs, at_p.rhs, Direction::AtMost),
        Link::new("psi", middle, final_bound, Direction::AtMost),
        Link::new("target", lhs, final_bound, Direction::AtMost),
    ];
    Ok(SchattenDoublingReport {
        p,
        scale,
        gamma,
        beta,
        x_norm,
        final_bound,
        links,
    })
}
