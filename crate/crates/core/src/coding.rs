//! Lossy coding rates of sample matrices.
//!
//! The rate of a `d × m` matrix `X` at precision `ε` is
//!
//! ```text
//! R(X, ε) = (m/2) · log₂ det(I + d/(m ε²) · X Xᵀ)
//! ```
//!
//! For data with a non-zero mean `μ` the centered part and the mean are coded
//! separately:
//!
//! ```text
//! R(X, ε) = (m/2) · log₂ det(I + d/(m ε²) · X̄ X̄ᵀ) + (d/2) · log₂(1 + μᵀμ / ε²)
//! ```
//!
//! All log-determinants go through a Cholesky factorization of whichever Gram
//! matrix is smaller: `det(I_d + α X Xᵀ) = det(I_m + α Xᵀ X)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{LabeledMatrix, Matrix};

/// Default encoding precision.
pub const DEFAULT_EPSILON: f64 = 2.0;

/// Diagonal jitter added once when the Cholesky factorization breaks down.
pub const CHOLESKY_JITTER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    ZeroMean,
    #[default]
    NonZeroMean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CodingConfig {
    pub epsilon: f64,
    pub variant: Variant,
}

impl Default for CodingConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            variant: Variant::NonZeroMean,
        }
    }
}

impl CodingConfig {
    pub fn new(epsilon: f64, variant: Variant) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { epsilon, variant })
    }

    /// Log base of every rate. Fixed: rates are in bits.
    pub const fn log_base(&self) -> u32 {
        2
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(eps))
    }
}

/// Natural log-determinant of a symmetric positive-definite `n × n` matrix
/// (column-major, only the lower triangle is read).
///
/// Retries once with `CHOLESKY_JITTER · I` added if a pivot is not positive.
pub fn logdet_spd(a: &[f64], n: usize) -> Result<f64> {
    assert_eq!(a.len(), n * n, "logdet_spd: expected {n}x{n} storage");
    let mut work = a.to_vec();
    if let Some(ld) = cholesky_logdet_in_place(&mut work, n) {
        return Ok(ld);
    }
    work.copy_from_slice(a);
    for i in 0..n {
        work[i * n + i] += CHOLESKY_JITTER;
    }
    cholesky_logdet_in_place(&mut work, n).ok_or(Error::NotPositiveDefinite)
}

/// Lower Cholesky factor overwrites the lower triangle of `a`; returns
/// `2 Σ ln Lᵢᵢ`, or `None` on a non-positive pivot.
fn cholesky_logdet_in_place(a: &mut [f64], n: usize) -> Option<f64> {
    let mut logdet = 0.0;
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            let l = a[k * n + j];
            diag -= l * l;
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return None;
        }
        let ljj = math::sqrt(diag);
        a[j * n + j] = ljj;
        logdet += math::ln(ljj);
        let inv = 1.0 / ljj;
        for i in (j + 1)..n {
            let mut s = a[j * n + i];
            for k in 0..j {
                s -= a[k * n + i] * a[k * n + j];
            }
            a[j * n + i] = s * inv;
        }
    }
    Some(2.0 * logdet)
}

/// `I + α·G` where `G` is the smaller of `X Xᵀ` (d×d) and `Xᵀ X` (m×m).
/// Returns the matrix storage and its order.
pub fn regularized_gram(x: &Matrix, alpha: f64) -> (Vec<f64>, usize) {
    let (d, m) = (x.rows(), x.cols());
    if d <= m {
        let mut g = vec![0.0; d * d];
        for c in x.columns() {
            for q in 0..d {
                let cq = c[q];
                if cq == 0.0 {
                    continue;
                }
                for p in q..d {
                    g[q * d + p] += c[p] * cq;
                }
            }
        }
        finish_gram(&mut g, d, alpha);
        (g, d)
    } else {
        let mut g = vec![0.0; m * m];
        for q in 0..m {
            let cq = x.col(q);
            for p in q..m {
                g[q * m + p] = dot(x.col(p), cq);
            }
        }
        finish_gram(&mut g, m, alpha);
        (g, m)
    }
}

/// Scales the lower triangle by `alpha`, mirrors it and adds the identity.
fn finish_gram(g: &mut [f64], n: usize, alpha: f64) {
    for q in 0..n {
        for p in q..n {
            let v = g[q * n + p] * alpha;
            g[q * n + p] = v;
            g[p * n + q] = v;
        }
        g[q * n + q] += 1.0;
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `log₂ det(I + α X Xᵀ)`, evaluated on the smaller Gram side.
pub fn log2det_identity_plus(x: &Matrix, alpha: f64) -> Result<f64> {
    if x.rows() == 0 || x.cols() == 0 {
        return Ok(0.0);
    }
    let (g, n) = regularized_gram(x, alpha);
    Ok(logdet_spd(&g, n)? / core::f64::consts::LN_2)
}

/// `(m/2) · log₂ det(I + d/(m ε²) X Xᵀ)` with no centering.
pub fn coding_rate_zero_mean(x: &Matrix, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    x.check_finite()?;
    zero_mean_term(x, epsilon)
}

fn zero_mean_term(x: &Matrix, epsilon: f64) -> Result<f64> {
    let (d, m) = (x.rows(), x.cols());
    if m == 0 || d == 0 {
        return Ok(0.0);
    }
    let alpha = d as f64 / (m as f64 * epsilon * epsilon);
    let ld = log2det_identity_plus(x, alpha)?;
    Ok((0.5 * m as f64 * ld).max(0.0))
}

/// Centers `x` in place and returns the removed column mean.
pub fn center_columns(x: &mut Matrix) -> Vec<f64> {
    let mu = x.column_mean();
    for j in 0..x.cols() {
        for (v, &u) in x.col_mut(j).iter_mut().zip(&mu) {
            *v -= u;
        }
    }
    mu
}

/// `(d/2) · log₂(1 + μᵀμ / ε²)`, the cost of the mean vector.
pub fn mean_rate(mu: &[f64], epsilon: f64) -> f64 {
    let sq: f64 = mu.iter().map(|v| v * v).sum();
    0.5 * mu.len() as f64 * math::log2_1p(sq / (epsilon * epsilon))
}

/// Rate of the centered part plus the rate of the mean.
pub fn coding_rate_nonzero_mean(x: &Matrix, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    x.check_finite()?;
    let (centered, mu) = split_mean(x);
    Ok(zero_mean_term(&centered, epsilon)? + mean_rate(&mu, epsilon))
}

fn split_mean(x: &Matrix) -> (Matrix, Vec<f64>) {
    let mut centered = x.clone();
    let mu = center_columns(&mut centered);
    (centered, mu)
}

/// Whole-matrix rate under the configured variant.
pub fn coding_rate(x: &Matrix, config: &CodingConfig) -> Result<f64> {
    match config.variant {
        Variant::ZeroMean => coding_rate_zero_mean(x, config.epsilon),
        Variant::NonZeroMean => coding_rate_nonzero_mean(x, config.epsilon),
    }
}

/// Sum of per-class rates given hard class memberships.
///
/// The non-zero-mean variant weights each class's mean term by `d/(2k)`
/// rather than `d/2`.
pub fn per_class_coding_rate(x: &LabeledMatrix, config: &CodingConfig) -> Result<f64> {
    check_epsilon(config.epsilon)?;
    let k = x.classes();
    let d = x.dim() as f64;
    let mut total = 0.0;
    for (class, block) in x.class_blocks().into_iter().enumerate() {
        if block.cols() == 0 {
            return Err(Error::EmptyClass { class });
        }
        total += match config.variant {
            Variant::ZeroMean => zero_mean_term(&block, config.epsilon)?,
            Variant::NonZeroMean => {
                let (centered, mu) = split_mean(&block);
                let sq: f64 = mu.iter().map(|v| v * v).sum();
                zero_mean_term(&centered, config.epsilon)?
                    + d / (2.0 * k as f64) * math::log2_1p(sq / (config.epsilon * config.epsilon))
            }
        };
    }
    Ok(total)
}
