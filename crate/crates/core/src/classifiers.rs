//! Baseline classifiers: k-nearest neighbors, multinomial logistic regression
//! and a one-vs-rest linear SVM. All of them standardize features with
//! statistics fitted on the training set.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom as _;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{LabeledMatrix, Matrix};
use crate::rng::{rng_at, rng_from};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClassifierKind {
    Knn,
    LogReg,
    LinearSvm,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Knn, ClassifierKind::LogReg, ClassifierKind::LinearSvm];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "knn",
            ClassifierKind::LogReg => "log_reg",
            ClassifierKind::LinearSvm => "linear_svm",
        }
    }
}

impl core::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "knn" => ClassifierKind::Knn,
            "log_reg" | "logreg" => ClassifierKind::LogReg,
            "linear_svm" | "svm" => ClassifierKind::LinearSvm,
            other => return Err(Error::InvalidSpec(format!("unknown classifier `{other}`"))),
        })
    }
}

pub const DEFAULT_K: usize = 5;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 1e-4;
pub const DEFAULT_EPOCHS: usize = 300;
pub const DEFAULT_LEARNING_RATE: f64 = 0.5;

/// Scale of the seeded initial weight perturbation.
const INIT_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    pub k_neighbors: usize,
    pub c_reg: f64,
    pub alpha_reg: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind) -> Self {
        Self {
            kind,
            k_neighbors: DEFAULT_K,
            c_reg: DEFAULT_C,
            alpha_reg: DEFAULT_ALPHA,
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LEARNING_RATE,
            seed: 0,
        }
    }

    pub fn knn(k: usize) -> Self {
        Self {
            k_neighbors: k,
            ..Self::new(ClassifierKind::Knn)
        }
    }

    pub fn log_reg() -> Self {
        Self::new(ClassifierKind::LogReg)
    }

    pub fn linear_svm(c_reg: f64) -> Self {
        Self {
            c_reg,
            ..Self::new(ClassifierKind::LinearSvm)
        }
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidSpec(format!("{what} must be positive")));
        match self.kind {
            ClassifierKind::Knn if self.k_neighbors == 0 => bad("k_neighbors"),
            ClassifierKind::LogReg if !(self.alpha_reg > 0.0) => bad("alpha_reg"),
            ClassifierKind::LinearSvm if !(self.c_reg > 0.0) => bad("c_reg"),
            ClassifierKind::LogReg | ClassifierKind::LinearSvm if self.epochs == 0 => bad("epochs"),
            ClassifierKind::LogReg if !(self.learning_rate > 0.0) => bad("learning_rate"),
            _ => Ok(()),
        }
    }
}

/// Per-feature standardization fitted on training data. Constant features
/// keep unit scale.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Scaler {
    pub fn fit(x: &Matrix) -> Self {
        let st = crate::datagen::FeatureStats::of(x);
        let std = st.std.into_iter().map(|s| if s > 0.0 { s } else { 1.0 }).collect();
        Self { mean: st.mean, std }
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for j in 0..out.cols() {
            for (f, v) in out.col_mut(j).iter_mut().enumerate() {
                *v = (*v - self.mean[f]) / self.std[f];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ModelParams {
    /// Standardized training samples and their labels.
    Knn { k: usize, data: Matrix, labels: Vec<usize> },
    /// One weight row per class (`classes × dim`, row-major) and a bias each.
    Linear { weights: Vec<f64>, bias: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainedModel {
    pub kind: ClassifierKind,
    pub dim: usize,
    pub classes: usize,
    pub scaler: Scaler,
    pub params: ModelParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub labels: Vec<usize>,
    pub accuracy: f64,
}

pub fn train(spec: &ClassifierSpec, data: &LabeledMatrix) -> Result<TrainedModel> {
    spec.validate()?;
    if data.classes() < 2 {
        return Err(Error::SingleClass);
    }
    let scaler = Scaler::fit(data.data());
    let x = scaler.apply(data.data());
    let (d, k) = (data.dim(), data.classes());
    let params = match spec.kind {
        ClassifierKind::Knn => {
            if spec.k_neighbors > data.len() {
                return Err(Error::InvalidSpec(format!(
                    "k_neighbors = {} exceeds training size {}",
                    spec.k_neighbors,
                    data.len()
                )));
            }
            ModelParams::Knn {
                k: spec.k_neighbors,
                data: x,
                labels: data.labels().to_vec(),
            }
        }
        ClassifierKind::LogReg => {
            let (weights, bias) = fit_log_reg(spec, &x, data.labels(), k);
            ModelParams::Linear { weights, bias }
        }
        ClassifierKind::LinearSvm => {
            let (weights, bias) = fit_svm(spec, &x, data.labels(), k);
            ModelParams::Linear { weights, bias }
        }
    };
    Ok(TrainedModel {
        kind: spec.kind,
        dim: d,
        classes: k,
        scaler,
        params,
    })
}

fn init_weights(seed: u64, k: usize, d: usize) -> Vec<f64> {
    let mut rng = rng_from(seed);
    (0..k * d)
        .map(|_| INIT_SCALE * (2.0 * rng.random::<f64>() - 1.0))
        .collect()
}

/// Full-batch gradient descent on mean cross-entropy plus `α/2 ‖W‖²`.
fn fit_log_reg(spec: &ClassifierSpec, x: &Matrix, labels: &[usize], k: usize) -> (Vec<f64>, Vec<f64>) {
    let (d, m) = (x.rows(), x.cols());
    let mut w = init_weights(spec.seed, k, d);
    let mut b = vec![0.0; k];
    let mut gw = vec![0.0; k * d];
    let mut gb = vec![0.0; k];
    let mut p = vec![0.0; k];
    let inv_m = 1.0 / m as f64;
    for _ in 0..spec.epochs {
        gw.iter_mut().for_each(|g| *g = 0.0);
        gb.iter_mut().for_each(|g| *g = 0.0);
        for (j, col) in x.columns().enumerate() {
            scores(&w, &b, col, &mut p);
            softmax(&mut p);
            p[labels[j]] -= 1.0;
            for c in 0..k {
                let r = p[c] * inv_m;
                gb[c] += r;
                for (g, &v) in gw[c * d..(c + 1) * d].iter_mut().zip(col) {
                    *g += r * v;
                }
            }
        }
        for (wi, gi) in w.iter_mut().zip(&gw) {
            *wi -= spec.learning_rate * (gi + spec.alpha_reg * *wi);
        }
        for (bi, gi) in b.iter_mut().zip(&gb) {
            *bi -= spec.learning_rate * gi;
        }
    }
    (w, b)
}

/// One-vs-rest L2-regularized hinge loss `½‖ŵ‖² + C Σ max(0, 1 − y ŵ·x̂)`,
/// solved by dual coordinate descent. The bias is the last entry of `ŵ` with
/// a constant feature of 1, so it is regularized too. Each epoch visits the
/// samples in a fresh seeded order.
fn fit_svm(spec: &ClassifierSpec, x: &Matrix, labels: &[usize], k: usize) -> (Vec<f64>, Vec<f64>) {
    let (d, m) = (x.rows(), x.cols());
    let c_reg = spec.c_reg;
    let q: Vec<f64> = x.columns().map(|col| crate::coding::dot(col, col) + 1.0).collect();
    let mut weights = vec![0.0; k * d];
    let mut bias = vec![0.0; k];
    let mut order: Vec<usize> = (0..m).collect();
    let mut alpha = vec![0.0; m];
    for c in 0..k {
        let mut rng = rng_at(spec.seed, &[c as u64]);
        let w = &mut weights[c * d..(c + 1) * d];
        let mut b = 0.0;
        alpha.iter_mut().for_each(|a| *a = 0.0);
        for _ in 0..spec.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let col = x.col(i);
                let y = if labels[i] == c { 1.0 } else { -1.0 };
                let g = y * (crate::coding::dot(w, col) + b) - 1.0;
                let a = alpha[i];
                let pg = if a <= 0.0 {
                    g.min(0.0)
                } else if a >= c_reg {
                    g.max(0.0)
                } else {
                    g
                };
                if pg == 0.0 {
                    continue;
                }
                let next = (a - g / q[i]).clamp(0.0, c_reg);
                let step = (next - a) * y;
                for (wi, &v) in w.iter_mut().zip(col) {
                    *wi += step * v;
                }
                b += step;
                alpha[i] = next;
            }
        }
        bias[c] = b;
    }
    (weights, bias)
}

fn scores(w: &[f64], b: &[f64], x: &[f64], out: &mut [f64]) {
    let d = x.len();
    for (c, o) in out.iter_mut().enumerate() {
        *o = crate::coding::dot(&w[c * d..(c + 1) * d], x) + b[c];
    }
}

fn softmax(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = math::exp(*x - max);
        sum += *x;
    }
    v.iter_mut().for_each(|x| *x /= sum);
}

/// Index of the largest value; ties go to the smallest index.
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

impl TrainedModel {
    /// Predicted class for every column of `x` (raw, unstandardized features).
    pub fn predict_matrix(&self, x: &Matrix) -> Result<Vec<usize>> {
        if x.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.rows(),
            });
        }
        let z = self.scaler.apply(x);
        Ok(match &self.params {
            ModelParams::Knn { k, data, labels } => z
                .columns()
                .map(|q| knn_vote(q, data, labels, *k, self.classes))
                .collect(),
            ModelParams::Linear { weights, bias } => {
                let mut s = vec![0.0; self.classes];
                z.columns()
                    .map(|q| {
                        scores(weights, bias, q, &mut s);
                        argmax(&s)
                    })
                    .collect()
            }
        })
    }
}

fn knn_vote(q: &[f64], data: &Matrix, labels: &[usize], k: usize, classes: usize) -> usize {
    // Squared distances keep the same order; stable sort keeps lowest index first on ties.
    let mut d: Vec<(f64, usize)> = data
        .columns()
        .enumerate()
        .map(|(j, c)| (c.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(), j))
        .collect();
    if k < d.len() {
        d.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.truncate(k);
    }
    let mut votes = vec![0usize; classes];
    for &(_, j) in &d {
        votes[labels[j]] += 1;
    }
    let mut best = 0;
    for (c, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = c;
        }
    }
    best
}

pub fn predict(model: &TrainedModel, test: &LabeledMatrix) -> Result<Prediction> {
    let labels = model.predict_matrix(test.data())?;
    let correct = labels.iter().zip(test.labels()).filter(|(a, b)| a == b).count();
    Ok(Prediction {
        accuracy: correct as f64 / test.len() as f64,
        labels,
    })
}
