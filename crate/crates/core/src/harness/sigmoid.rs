//! Four-parameter logistic task curves fitted by Levenberg–Marquardt.
//!
//! ```text
//! P(θ) = (u − l) / (1 + exp(−a (θ − b))) + l
//! ```
//!
//! The optimizer works on unconstrained coordinates `q` with
//!
//! ```text
//! l = σ(q₀)   u = l + (1 − l) σ(q₁)   a = exp(q₂)   b = c + h tanh(q₃)
//! ```
//!
//! so every iterate has `0 < l < u < 1`, `a > 0`, and `b` within one θ-range
//! of the data (`c` is the centre of the θ range, `h` 1.5 times its width).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::stats;

pub const MAX_ITERATIONS: usize = 200;
pub const STEP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SigmoidParams {
    pub u: f64,
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl SigmoidParams {
    pub fn eval(&self, theta: f64) -> f64 {
        (self.u - self.l) / (1.0 + math::exp(-self.a * (theta - self.b))) + self.l
    }

    /// Largest slope of the curve, reached at `θ = b`.
    pub fn max_slope(&self) -> f64 {
        0.25 * (self.u - self.l) * self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitStatus {
    Converged,
    /// Iteration budget exhausted; the best iterate is returned.
    MaxIterations,
    /// The fitted curve is flat (`u − l ≤ 1e-9`), so `a` and `b` are
    /// meaningless. Constant data always ends here.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SigmoidFit {
    pub params: SigmoidParams,
    pub status: FitStatus,
    pub iterations: usize,
    pub rmse: f64,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + math::exp(-x))
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-9, 1.0 - 1e-9);
    math::ln(p / (1.0 - p))
}

/// Maps internal coordinates to curve parameters for one θ window.
#[derive(Clone, Copy)]
struct Coords {
    centre: f64,
    half: f64,
}

impl Coords {
    fn params(&self, q: &[f64; 4]) -> SigmoidParams {
        let l = logistic(q[0]);
        SigmoidParams {
            u: l + (1.0 - l) * logistic(q[1]),
            l,
            a: math::exp(q[2]),
            b: self.centre + self.half * libm::tanh(q[3]),
        }
    }

    fn coords(&self, p: &SigmoidParams) -> [f64; 4] {
        let t = ((p.b - self.centre) / self.half).clamp(-0.999_999, 0.999_999);
        [
            logit(p.l),
            logit((p.u - p.l) / (1.0 - p.l)),
            math::ln(p.a),
            libm::atanh(t),
        ]
    }
}

fn sse(theta: &[f64], y: &[f64], s: &SigmoidParams) -> f64 {
    theta
        .iter()
        .zip(y)
        .map(|(&t, &v)| (s.eval(t) - v) * (s.eval(t) - v))
        .sum()
}

pub fn fit_sigmoid(theta: &[f64], p_acc: &[f64]) -> Result<SigmoidFit> {
    if theta.len() != p_acc.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            found: p_acc.len(),
        });
    }
    if theta.len() < 4 {
        return Err(Error::InvalidArgument(alloc::format!(
            "sigmoid fit needs at least 4 points, got {}",
            theta.len()
        )));
    }
    if theta.iter().chain(p_acc).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("sigmoid fit inputs must be finite".into()));
    }
    let hi = p_acc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = p_acc.iter().copied().fold(f64::INFINITY, f64::min);
    let t_hi = theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let t_lo = theta.iter().copied().fold(f64::INFINITY, f64::min);
    let range = t_hi - t_lo;
    let a0 = if range > 0.0 { 4.0 / range } else { 4.0 };
    let b0 = stats::median(theta);
    if hi - lo <= 0.0 || range <= 0.0 {
        let params = SigmoidParams {
            u: hi,
            l: lo,
            a: a0,
            b: b0,
        };
        let rmse = rmse(theta, p_acc, &params);
        return Ok(SigmoidFit {
            params,
            status: FitStatus::Degenerate,
            iterations: 0,
            rmse,
        });
    }

    let coords = Coords {
        centre: 0.5 * (t_lo + t_hi),
        half: 1.5 * range,
    };
    let l0 = lo.clamp(1e-6, 1.0 - 2e-6);
    let u0 = hi.clamp(l0 + 1e-6, 1.0 - 1e-6);
    let mut p = coords.coords(&SigmoidParams {
        u: u0,
        l: l0,
        a: a0,
        b: b0,
    });
    let mut cost = sse(theta, p_acc, &coords.params(&p));
    let mut mu = 1e-3;
    let mut status = FitStatus::MaxIterations;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(theta, p_acc, &p, coords);
        let mut improved = false;
        let mut small_step = false;
        while mu < 1e16 {
            let mut a = jtj;
            for i in 0..4 {
                a[i][i] += mu * jtj[i][i].max(1e-12);
            }
            let Some(delta) = solve4(a, jtr.map(|v| -v)) else {
                mu *= 10.0;
                continue;
            };
            let trial = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2], p[3] + delta[3]];
            let c = sse(theta, p_acc, &coords.params(&trial));
            let norm_d = math::sqrt(delta.iter().map(|v| v * v).sum());
            let norm_p = math::sqrt(p.iter().map(|v| v * v).sum());
            small_step = norm_d <= STEP_TOLERANCE * (norm_p + STEP_TOLERANCE);
            if c.is_finite() && c <= cost {
                p = trial;
                cost = c;
                mu = (mu / 10.0).max(1e-15);
                improved = true;
                break;
            }
            if small_step {
                break;
            }
            mu *= 10.0;
        }
        if small_step || !improved || cost == 0.0 {
            status = FitStatus::Converged;
            break;
        }
    }
    let params = coords.params(&p);
    if params.u - params.l <= 1e-9 {
        status = FitStatus::Degenerate;
    }
    Ok(SigmoidFit {
        params,
        status,
        iterations,
        rmse: rmse(theta, p_acc, &params),
    })
}

fn rmse(theta: &[f64], y: &[f64], s: &SigmoidParams) -> f64 {
    let n = theta.len() as f64;
    math::sqrt(
        theta
            .iter()
            .zip(y)
            .map(|(&t, &v)| (s.eval(t) - v) * (s.eval(t) - v))
            .sum::<f64>()
            / n,
    )
}

/// `JᵀJ` and `Jᵀr` for residuals `r = model − y` in the internal coordinates.
fn normal_equations(theta: &[f64], y: &[f64], q: &[f64; 4], coords: Coords) -> ([[f64; 4]; 4], [f64; 4]) {
    let p = coords.params(q);
    let g1 = logistic(q[1]);
    let span = p.u - p.l;
    let th = libm::tanh(q[3]);
    let mut jtj = [[0.0; 4]; 4];
    let mut jtr = [0.0; 4];
    for (&t, &v) in theta.iter().zip(y) {
        let s = 1.0 / (1.0 + math::exp(-p.a * (t - p.b)));
        let ds = s * (1.0 - s);
        let r = span * s + p.l - v;
        let j = [
            (1.0 - g1 * s) * p.l * (1.0 - p.l),
            (1.0 - p.l) * g1 * (1.0 - g1) * s,
            span * ds * p.a * (t - p.b),
            -span * ds * p.a * coords.half * (1.0 - th * th),
        ];
        for i in 0..4 {
            jtr[i] += j[i] * r;
            for k in 0..4 {
                jtj[i][k] += j[i] * j[k];
            }
        }
    }
    (jtj, jtr)
}

/// Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[piv][col].abs() > 1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            let pivot = a[col];
            for (v, p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `k` values evenly spaced on `[0, 1]`.
pub fn theta_grid(k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        _ => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
    }
}
