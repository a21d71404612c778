//! Task curves, difficulty polynomials and ability estimation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::sigmoid::{fit_sigmoid, theta_grid, SigmoidFit, SigmoidParams};
use crate::classifiers::{ClassifierKind, ClassifierSpec};
use crate::error::{Error, Result};
use crate::math;

/// Accuracy matrix of a classifier family over a task family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskCurves {
    /// `p_acc[task][variant]`, variants sorted ascending by their best accuracy.
    pub p_acc: Vec<Vec<f64>>,
    pub theta: Vec<f64>,
    /// Variant specs in sorted order.
    pub variants: Vec<ClassifierSpec>,
}

impl TaskCurves {
    pub fn tasks(&self) -> usize {
        self.p_acc.len()
    }

    pub fn row(&self, task: usize) -> &[f64] {
        &self.p_acc[task]
    }
}

/// A grid of linear SVMs whose `C` and epoch budget both grow geometrically,
/// giving a spread of abilities.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmFamily {
    pub k: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub epochs_min: usize,
    pub epochs_max: usize,
}

impl Default for SvmFamily {
    fn default() -> Self {
        Self {
            k: 30,
            c_min: 1e-2,
            c_max: 1e2,
            epochs_min: 100,
            epochs_max: 100,
        }
    }
}

impl SvmFamily {
    pub fn specs(&self, seed: u64) -> Result<Vec<ClassifierSpec>> {
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 variants, got {}",
                self.k
            )));
        }
        if !(self.c_min > 0.0 && self.c_min <= self.c_max) || self.epochs_min == 0 || self.epochs_min > self.epochs_max
        {
            return Err(Error::InvalidArgument("invalid C or epoch range".into()));
        }
        let grid = theta_grid(self.k);
        Ok(grid
            .iter()
            .map(|&f| {
                let c = self.c_min * math::powf(self.c_max / self.c_min, f);
                let e = self.epochs_min as f64 * math::powf(self.epochs_max as f64 / self.epochs_min as f64, f);
                ClassifierSpec::linear_svm(c)
                    .with_epochs(libm::round(e) as usize)
                    .with_seed(seed)
            })
            .collect())
    }
}

/// Sorts the variant columns ascending by their maximum (stable) and assigns
/// evenly spaced θ. `columns[v][task]` holds variant `v`'s accuracies.
pub fn assemble_task_curves(specs: &[ClassifierSpec], columns: Vec<Vec<f64>>) -> Result<TaskCurves> {
    if specs.len() != columns.len() {
        return Err(Error::DimensionMismatch {
            expected: specs.len(),
            found: columns.len(),
        });
    }
    if columns.len() < 2 {
        return Err(Error::InvalidArgument("task curves need at least 2 variants".into()));
    }
    let n = columns[0].len();
    if let Some(bad) = columns.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let max = |c: &Vec<f64>| c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.sort_by(|&i, &j| max(&columns[i]).total_cmp(&max(&columns[j])));
    let p_acc = (0..n).map(|t| order.iter().map(|&v| columns[v][t]).collect()).collect();
    Ok(TaskCurves {
        p_acc,
        theta: theta_grid(columns.len()),
        variants: order.iter().map(|&v| specs[v]).collect(),
    })
}

/// Trains every variant on the clean set and evaluates it on every task.
pub fn build_task_curves(specs: &[ClassifierSpec], taskset: &crate::datagen::SnrTaskSet) -> Result<TaskCurves> {
    if let Some(s) = specs.iter().find(|s| s.kind != ClassifierKind::LinearSvm) {
        return Err(Error::InvalidSpec(format!(
            "task curves use linear SVM variants, got {:?}",
            s.kind
        )));
    }
    let columns = specs
        .iter()
        .map(|s| super::sweep::task_accuracies(&crate::classifiers::train(s, &taskset.train)?, taskset))
        .collect::<Result<Vec<_>>>()?;
    assemble_task_curves(specs, columns)
}

/// Fits one sigmoid per task row.
pub fn fit_task_sigmoids(curves: &TaskCurves) -> Result<Vec<SigmoidFit>> {
    curves.p_acc.iter().map(|row| fit_sigmoid(&curves.theta, row)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskCurve {
    /// Position of the task in the caller's task order.
    pub task: usize,
    pub rs: f64,
    pub params: SigmoidParams,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskCurveSet {
    /// Sorted by `rs`.
    pub tasks: Vec<TaskCurve>,
    /// `a(rs) = h₀ + h₁·rs + h₂·rs²`.
    pub a_coef: [f64; 3],
    /// `b(rs) = p₀ + p₁·rs + p₂·rs²`.
    pub b_coef: [f64; 3],
}

fn poly(c: &[f64; 3], x: f64) -> f64 {
    c[0] + c[1] * x + c[2] * x * x
}

impl TaskCurveSet {
    pub fn a_at(&self, rs: f64) -> f64 {
        poly(&self.a_coef, rs)
    }

    pub fn b_at(&self, rs: f64) -> f64 {
        poly(&self.b_coef, rs)
    }

    /// Modeled accuracy of task `i` (in sorted order) at ability `theta`.
    pub fn model(&self, i: usize, theta: f64) -> f64 {
        let t = &self.tasks[i];
        SigmoidParams {
            u: t.params.u,
            l: t.params.l,
            a: self.a_at(t.rs),
            b: self.b_at(t.rs),
        }
        .eval(theta)
    }
}

/// Quadratic least squares fits of slope `a` and shift `b` against task RS.
pub fn fit_difficulty_polynomials(curves: &[(f64, SigmoidParams)]) -> Result<TaskCurveSet> {
    let mut distinct: Vec<f64> = curves.iter().map(|c| c.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::RankDeficient {
            distinct: distinct.len(),
        });
    }
    let mut tasks: Vec<TaskCurve> = curves
        .iter()
        .enumerate()
        .map(|(task, &(rs, params))| TaskCurve { task, rs, params })
        .collect();
    tasks.sort_by(|x, y| x.rs.total_cmp(&y.rs).then(x.task.cmp(&y.task)));
    let rs: Vec<f64> = tasks.iter().map(|t| t.rs).collect();
    let a: Vec<f64> = tasks.iter().map(|t| t.params.a).collect();
    let b: Vec<f64> = tasks.iter().map(|t| t.params.b).collect();
    Ok(TaskCurveSet {
        a_coef: quadratic_lstsq(&rs, &a)?,
        b_coef: quadratic_lstsq(&rs, &b)?,
        tasks,
    })
}

/// Least squares `y ≈ c₀ + c₁x + c₂x²` by Householder QR on the centered and
/// scaled abscissa, mapped back to raw coefficients.
pub fn quadratic_lstsq(x: &[f64], y: &[f64]) -> Result<[f64; 3]> {
    let n = x.len();
    let mx = x.iter().sum::<f64>() / n as f64;
    let sx = x.iter().map(|v| (v - mx).abs()).fold(0.0, f64::max);
    if !(sx > 0.0) {
        return Err(Error::RankDeficient { distinct: 1 });
    }
    // Columns of the design matrix in z = (x − mx)/sx.
    let mut q: Vec<[f64; 3]> = x
        .iter()
        .map(|&v| {
            let z = (v - mx) / sx;
            [1.0, z, z * z]
        })
        .collect();
    let mut rhs = y.to_vec();
    let mut r = [[0.0; 3]; 3];
    for k in 0..3 {
        let norm = math::sqrt(q.iter().skip(k).map(|row| row[k] * row[k]).sum());
        if norm < 1e-12 * n as f64 {
            return Err(Error::RankDeficient { distinct: k });
        }
        let alpha = if q[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = q.iter().skip(k).map(|row| row[k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        for j in k..3 {
            let s: f64 = v.iter().zip(q.iter().skip(k)).map(|(vi, row)| vi * row[j]).sum::<f64>() * 2.0 / vv;
            for (vi, row) in v.iter().zip(q.iter_mut().skip(k)) {
                row[j] -= s * vi;
            }
        }
        let s: f64 = v.iter().zip(rhs.iter().skip(k)).map(|(vi, ri)| vi * ri).sum::<f64>() * 2.0 / vv;
        for (vi, ri) in v.iter().zip(rhs.iter_mut().skip(k)) {
            *ri -= s * vi;
        }
        for j in k..3 {
            r[k][j] = q[k][j];
        }
    }
    let mut c = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|j| r[k][j] * c[j]).sum();
        c[k] = (rhs[k] - s) / r[k][k];
    }
    // y = c0 + c1 z + c2 z², z = (x − mx)/sx.
    let (s1, s2) = (1.0 / sx, 1.0 / (sx * sx));
    Ok([
        c[0] - c[1] * mx * s1 + c[2] * mx * mx * s2,
        c[1] * s1 - 2.0 * c[2] * mx * s2,
        c[2] * s2,
    ])
}

/// Accuracies within this distance of a task's `u` or `l` are flagged as
/// saturated.
pub const SATURATION_BAND: f64 = 0.02;

/// Resolution of the θ̂ grid search.
pub const THETA_RESOLUTION: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbilityEstimate {
    /// Estimate from non-saturated tasks only.
    pub theta: f64,
    /// Estimate from every task.
    pub theta_all: f64,
    /// `model(θ̂) − accuracy` per task, in the caller's task order.
    pub residuals: Vec<f64>,
    pub saturated: Vec<bool>,
}

/// Minimizes the squared error over `θ ∈ [0, 1]` on a `1e-4` grid, using the
/// tasks in `use_task` (sorted-order indices). Ties go to the smallest θ.
fn grid_theta(curves: &TaskCurveSet, acc_sorted: &[f64], use_task: &[usize]) -> f64 {
    let steps = libm::round(1.0 / THETA_RESOLUTION) as usize;
    let mut best = (f64::INFINITY, 0.0);
    for s in 0..=steps {
        let theta = s as f64 / steps as f64;
        let err: f64 = use_task
            .iter()
            .map(|&i| {
                let r = curves.model(i, theta) - acc_sorted[i];
                r * r
            })
            .sum();
        if err < best.0 {
            best = (err, theta);
        }
    }
    best.1
}

/// Estimates ability from per-task accuracies given in the caller's task
/// order (the `task` field of each curve).
pub fn estimate_ability(curves: &TaskCurveSet, accuracies: &[f64]) -> Result<AbilityEstimate> {
    let all: Vec<usize> = (0..curves.tasks.len()).collect();
    estimate_ability_on(curves, accuracies, &all)
}

/// As [`estimate_ability`], restricted to the tasks whose caller-order index
/// appears in `subset`.
pub fn estimate_ability_on(curves: &TaskCurveSet, accuracies: &[f64], subset: &[usize]) -> Result<AbilityEstimate> {
    let n = curves.tasks.len();
    if accuracies.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: accuracies.len(),
        });
    }
    if let Some(&bad) = subset.iter().find(|&&t| t >= n) {
        return Err(Error::InvalidArgument(format!("task index {bad} out of range")));
    }
    let acc_sorted: Vec<f64> = curves.tasks.iter().map(|t| accuracies[t.task]).collect();
    let mut saturated = vec![false; n];
    for (i, t) in curves.tasks.iter().enumerate() {
        let a = acc_sorted[i];
        saturated[t.task] = (a - t.params.u).abs() <= SATURATION_BAND || (a - t.params.l).abs() <= SATURATION_BAND;
    }
    let chosen: Vec<usize> = (0..n).filter(|&i| subset.contains(&curves.tasks[i].task)).collect();
    let unsaturated: Vec<usize> = chosen
        .iter()
        .copied()
        .filter(|&i| !saturated[curves.tasks[i].task])
        .collect();
    if unsaturated.is_empty() {
        return Err(Error::AllSaturated);
    }
    let theta = grid_theta(curves, &acc_sorted, &unsaturated);
    let theta_all = grid_theta(curves, &acc_sorted, &chosen);
    let mut residuals = vec![0.0; n];
    for (i, t) in curves.tasks.iter().enumerate() {
        residuals[t.task] = curves.model(i, theta) - acc_sorted[i];
    }
    Ok(AbilityEstimate {
        theta,
        theta_all,
        residuals,
        saturated,
    })
}
