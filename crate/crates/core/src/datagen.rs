//! Synthetic two-class datasets, feature preprocessing and SNR-controlled
//! noise injection.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{LabeledMatrix, Matrix};
use crate::rng::{derive_seed, rng_at, rng_from, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Shape {
    Blobs,
    Moons,
    Circles,
    Xor,
    Spirals,
    Random,
    Boundary,
}

impl Shape {
    /// The six shapes ordered from most to least separable.
    pub const TABLE: [Shape; 6] = [
        Shape::Blobs,
        Shape::Moons,
        Shape::Circles,
        Shape::Xor,
        Shape::Spirals,
        Shape::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Blobs => "blobs",
            Shape::Moons => "moons",
            Shape::Circles => "circles",
            Shape::Xor => "xor",
            Shape::Spirals => "spirals",
            Shape::Random => "random",
            Shape::Boundary => "boundary",
        }
    }

    /// Default jitter (or cluster SD for blobs and xor).
    pub fn default_noise(self) -> f64 {
        match self {
            Shape::Blobs => 1.0,
            Shape::Moons => 0.1,
            Shape::Circles => 0.05,
            Shape::Xor => 1.6,
            Shape::Spirals => 0.5,
            Shape::Random | Shape::Boundary => 0.0,
        }
    }
}

impl core::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "blobs" => Shape::Blobs,
            "moons" => Shape::Moons,
            "circles" => Shape::Circles,
            "xor" => Shape::Xor,
            "spirals" => Shape::Spirals,
            "random" => Shape::Random,
            "boundary" => Shape::Boundary,
            other => return Err(Error::InvalidSpec(format!("unknown shape `{other}`"))),
        })
    }
}

/// Half-width of the band around the sine boundary that is always populated.
pub const BOUNDARY_MARGIN: f64 = 0.1;

/// Fraction of each boundary class drawn from inside the margin band.
pub const BOUNDARY_BAND_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorSpec {
    pub shape: Shape,
    pub samples_per_class: usize,
    pub noise_or_sd: f64,
    /// Sine frequency for `Shape::Boundary`, in `1..=4`.
    pub level: u32,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(shape: Shape, samples_per_class: usize, seed: u64) -> Self {
        Self {
            shape,
            samples_per_class,
            noise_or_sd: shape.default_noise(),
            level: 1,
            seed,
        }
    }

    pub fn with_noise(mut self, noise_or_sd: f64) -> Self {
        self.noise_or_sd = noise_or_sd;
        self
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_class < 2 {
            return Err(Error::InvalidSpec(format!(
                "samples_per_class must be at least 2, got {}",
                self.samples_per_class
            )));
        }
        if !(self.noise_or_sd >= 0.0) || !self.noise_or_sd.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "noise must be finite and >= 0, got {}",
                self.noise_or_sd
            )));
        }
        if self.shape == Shape::Boundary && !(1..=4).contains(&self.level) {
            return Err(Error::InvalidSpec(format!(
                "boundary level must be in 1..=4, got {}",
                self.level
            )));
        }
        Ok(())
    }
}

fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Samples a dataset. Columns are grouped by class (class 0 first).
pub fn generate(spec: &GeneratorSpec) -> Result<LabeledMatrix> {
    spec.validate()?;
    let n = spec.samples_per_class;
    let s = spec.noise_or_sd;
    let mut rng = rng_from(derive_seed(spec.seed, &[spec.shape as u64]));
    let mut cols: Vec<[f64; 2]> = Vec::with_capacity(2 * n);
    let mut labels: Vec<usize> = Vec::with_capacity(2 * n);
    let mut push = |cols: &mut Vec<[f64; 2]>, p: [f64; 2], c: usize| {
        cols.push(p);
        labels.push(c);
    };
    let denom = (n - 1) as f64;
    match spec.shape {
        Shape::Blobs => {
            for (c, cx) in [(0, -5.0), (1, 5.0)] {
                for _ in 0..n {
                    let p = [cx + s * normal(&mut rng), s * normal(&mut rng)];
                    push(&mut cols, p, c);
                }
            }
        }
        Shape::Moons => {
            for i in 0..n {
                let t = PI * i as f64 / denom;
                let p = [math::cos(t) + s * normal(&mut rng), math::sin(t) + s * normal(&mut rng)];
                push(&mut cols, p, 0);
            }
            for i in 0..n {
                let t = PI * i as f64 / denom;
                let p = [
                    1.0 - math::cos(t) + s * normal(&mut rng),
                    0.5 - math::sin(t) + s * normal(&mut rng),
                ];
                push(&mut cols, p, 1);
            }
        }
        Shape::Circles => {
            for (c, r) in [(0, 1.0), (1, 0.5)] {
                for i in 0..n {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    let p = [
                        r * math::cos(t) + s * normal(&mut rng),
                        r * math::sin(t) + s * normal(&mut rng),
                    ];
                    push(&mut cols, p, c);
                }
            }
        }
        Shape::Xor => {
            // Class 0 holds the quadrants where x·y > 0.
            let centers = [[[1.0, 1.0], [-1.0, -1.0]], [[1.0, -1.0], [-1.0, 1.0]]];
            for (c, pair) in centers.iter().enumerate() {
                for i in 0..n {
                    let mu = pair[i % 2];
                    let p = [mu[0] + s * normal(&mut rng), mu[1] + s * normal(&mut rng)];
                    push(&mut cols, p, c);
                }
            }
        }
        Shape::Spirals => {
            for c in 0..2 {
                let phase = c as f64 * PI;
                for _ in 0..n {
                    let t = 4.0 * PI * rng.random::<f64>();
                    let r = t / (4.0 * PI);
                    let p = [
                        r * math::cos(t + phase) + s * normal(&mut rng),
                        r * math::sin(t + phase) + s * normal(&mut rng),
                    ];
                    push(&mut cols, p, c);
                }
            }
        }
        Shape::Random => {
            let mut lab: Vec<usize> = (0..2 * n).map(|i| i / n).collect();
            for i in (1..lab.len()).rev() {
                lab.swap(i, rng.random_range(0..=i));
            }
            for c in lab {
                let p = [rng.random::<f64>(), rng.random::<f64>()];
                push(&mut cols, p, c);
            }
        }
        Shape::Boundary => {
            let f = spec.level as f64;
            let band = libm::ceil(BOUNDARY_BAND_FRACTION * n as f64) as usize;
            for c in 0..2 {
                // Class 0 lies above the curve, class 1 below.
                let sign = if c == 0 { 1.0 } else { -1.0 };
                for i in 0..n {
                    let p = if i < band {
                        let x = 2.0 * PI * rng.random::<f64>();
                        let off = BOUNDARY_MARGIN * rng.random::<f64>();
                        [x, math::sin(f * x) + sign * off]
                    } else {
                        loop {
                            let x = 2.0 * PI * rng.random::<f64>();
                            let y = 4.0 * rng.random::<f64>() - 2.0;
                            if sign * (y - math::sin(f * x)) > 0.0 {
                                break [x, y];
                            }
                        }
                    };
                    push(&mut cols, [p[0], p[1] + s * normal(&mut rng)], c);
                }
            }
        }
    }
    LabeledMatrix::with_classes(Matrix::from_columns(&cols)?, labels, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Preprocess {
    /// `(x − min) / (max − min)` per feature.
    MinMax,
    /// `(x − mean) / (max − min)` per feature.
    MeanNorm,
    /// Each sample scaled to unit Euclidean norm.
    L2Norm,
    /// `x − mean` per feature.
    Center,
    /// `(x − mean) / std` per feature (population std).
    Standardize,
}

impl Preprocess {
    pub const ALL: [Preprocess; 5] = [
        Preprocess::MinMax,
        Preprocess::MeanNorm,
        Preprocess::L2Norm,
        Preprocess::Center,
        Preprocess::Standardize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preprocess::MinMax => "min_max",
            Preprocess::MeanNorm => "mean_norm",
            Preprocess::L2Norm => "l2_norm",
            Preprocess::Center => "center",
            Preprocess::Standardize => "standardize",
        }
    }
}

impl core::str::FromStr for Preprocess {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "min_max" | "minmax" => Preprocess::MinMax,
            "mean_norm" | "meannorm" => Preprocess::MeanNorm,
            "l2_norm" | "l2norm" | "l2" => Preprocess::L2Norm,
            "center" => Preprocess::Center,
            "standardize" => Preprocess::Standardize,
            other => return Err(Error::InvalidSpec(format!("unknown preprocessing `{other}`"))),
        })
    }
}

/// Per-feature mean, population std, min and max.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl FeatureStats {
    pub fn of(x: &Matrix) -> Self {
        let d = x.rows();
        let m = x.cols() as f64;
        let mean = x.column_mean();
        let mut var = vec![0.0; d];
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for c in x.columns() {
            for f in 0..d {
                let v = c[f];
                var[f] += (v - mean[f]) * (v - mean[f]);
                min[f] = min[f].min(v);
                max[f] = max[f].max(v);
            }
        }
        let std = var.iter().map(|v| math::sqrt(v / m)).collect();
        Self { mean, std, min, max }
    }
}

pub fn preprocess(x: &LabeledMatrix, method: Preprocess) -> Result<LabeledMatrix> {
    let mut data = x.data().clone();
    let d = data.rows();
    if method == Preprocess::L2Norm {
        for j in 0..data.cols() {
            let col = data.col_mut(j);
            let norm = math::sqrt(col.iter().map(|v| v * v).sum());
            if norm == 0.0 {
                return Err(Error::ZeroVector { sample: j });
            }
            col.iter_mut().for_each(|v| *v /= norm);
        }
        return x.with_data(data);
    }
    let st = FeatureStats::of(&data);
    let mut shift = vec![0.0; d];
    let mut scale = vec![1.0; d];
    for f in 0..d {
        let range = st.max[f] - st.min[f];
        let (s0, s1) = match method {
            Preprocess::MinMax => (st.min[f], range),
            Preprocess::MeanNorm => (st.mean[f], range),
            Preprocess::Center => (st.mean[f], 1.0),
            Preprocess::Standardize => (st.mean[f], st.std[f]),
            Preprocess::L2Norm => unreachable!(),
        };
        if !(s1 > 0.0) {
            return Err(Error::DegenerateFeature { feature: f });
        }
        shift[f] = s0;
        scale[f] = s1;
    }
    for j in 0..data.cols() {
        for (f, v) in data.col_mut(j).iter_mut().enumerate() {
            *v = (*v - shift[f]) / scale[f];
        }
    }
    x.with_data(data)
}

/// How the total noise variance is divided among features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseSplit {
    #[default]
    Equal,
    /// Feature `f` receives a share proportional to its own mean power.
    Proportional,
}

/// Mean over samples of the squared norm of each sample.
pub fn signal_power(x: &Matrix) -> f64 {
    let m = x.cols() as f64;
    x.as_slice().iter().map(|v| v * v).sum::<f64>() / m
}

/// Adds white Gaussian noise so that `10·log10(P_x / N) = snr_db`.
pub fn inject_noise_snr(x: &LabeledMatrix, snr_db: f64, seed: u64, split: NoiseSplit) -> Result<LabeledMatrix> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(format!(
            "snr must be a number or +inf, got {snr_db}"
        )));
    }
    let data = x.data();
    let p = signal_power(data);
    if !(p > 0.0) {
        return Err(Error::ZeroSignalPower);
    }
    let noise = p / math::powf(10.0, snr_db / 10.0);
    let d = data.rows();
    let m = data.cols() as f64;
    let sd: Vec<f64> = match split {
        NoiseSplit::Equal => vec![math::sqrt(noise / d as f64); d],
        NoiseSplit::Proportional => (0..d)
            .map(|f| {
                let pf = data.columns().map(|c| c[f] * c[f]).sum::<f64>() / m;
                math::sqrt(noise * pf / p)
            })
            .collect(),
    };
    let mut out = data.clone();
    if noise > 0.0 {
        let mut rng = rng_from(seed);
        for j in 0..out.cols() {
            for (v, &s) in out.col_mut(j).iter_mut().zip(&sd) {
                *v += s * normal(&mut rng);
            }
        }
    }
    x.with_data(out)
}

/// One SNR level with its Monte-Carlo noisy copies.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrTask {
    pub snr_db: f64,
    pub trials: Vec<LabeledMatrix>,
}

/// Noisy test sets derived from one clean training set.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrTaskSet {
    pub train: LabeledMatrix,
    pub tasks: Vec<SnrTask>,
    pub trials: usize,
    pub seed: u64,
    pub split: NoiseSplit,
}

impl SnrTaskSet {
    pub fn levels(&self) -> Vec<f64> {
        self.tasks.iter().map(|t| t.snr_db).collect()
    }
}

/// `n` evenly spaced values from `lo` to `hi`, both included.
pub fn snr_levels(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidRange(format!("need at least 2 SNR levels, got {n}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidRange(format!("SNR range [{lo}, {hi}] is empty")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

/// Seed of the noisy copy for `(level, trial)`.
pub fn trial_seed(seed: u64, level: usize, trial: usize) -> u64 {
    derive_seed(seed, &[level as u64, trial as u64])
}

pub fn build_snr_taskset(
    train: &LabeledMatrix,
    snr_lo: f64,
    snr_hi: f64,
    n_tasks: usize,
    trials: usize,
    seed: u64,
    split: NoiseSplit,
) -> Result<SnrTaskSet> {
    if trials == 0 {
        return Err(Error::InvalidRange("trials must be at least 1".into()));
    }
    let levels = snr_levels(snr_lo, snr_hi, n_tasks)?;
    let mut tasks = Vec::with_capacity(levels.len());
    for (li, &snr_db) in levels.iter().enumerate() {
        let copies = (0..trials)
            .map(|t| inject_noise_snr(train, snr_db, trial_seed(seed, li, t), split))
            .collect::<Result<Vec<_>>>()?;
        tasks.push(SnrTask { snr_db, trials: copies });
    }
    Ok(SnrTaskSet {
        train: train.clone(),
        tasks,
        trials,
        seed,
        split,
    })
}

/// Gaussian clusters in `d` dimensions with centers drawn uniformly from
/// `[-spread, spread]^d`; a general-purpose surrogate for multi-class data.
pub fn gaussian_clusters(
    classes: usize,
    per_class: usize,
    dim: usize,
    spread: f64,
    sd: f64,
    seed: u64,
) -> Result<LabeledMatrix> {
    if classes < 2 || per_class < 2 || dim < 1 {
        return Err(Error::InvalidSpec(format!(
            "need classes >= 2, per_class >= 2, dim >= 1 (got {classes}, {per_class}, {dim})"
        )));
    }
    let mut rng = rng_at(seed, &[0xC1]);
    let centers: Vec<Vec<f64>> = (0..classes)
        .map(|_| (0..dim).map(|_| spread * (2.0 * rng.random::<f64>() - 1.0)).collect())
        .collect();
    let mut data = Vec::with_capacity(classes * per_class * dim);
    let mut labels = Vec::with_capacity(classes * per_class);
    for (c, mu) in centers.iter().enumerate() {
        for _ in 0..per_class {
            data.extend(mu.iter().map(|&u| u + sd * normal(&mut rng)));
            labels.push(c);
        }
    }
    LabeledMatrix::with_classes(Matrix::from_col_major(dim, classes * per_class, data)?, labels, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn generators_are_deterministic_and_seed_sensitive() {
        for shape in [
            Shape::Blobs,
            Shape::Moons,
            Shape::Circles,
            Shape::Xor,
            Shape::Spirals,
            Shape::Random,
            Shape::Boundary,
        ] {
            let spec = GeneratorSpec::new(shape, 20, 9).with_level(2);
            let a = generate(&spec).unwrap();
            assert_eq!(a, generate(&spec).unwrap());
            assert_ne!(a, generate(&GeneratorSpec { seed: 10, ..spec }).unwrap());
            assert_eq!(a.len(), 40);
            assert_eq!(a.class_counts(), vec![20, 20]);
        }
    }

    #[test]
    fn boundary_labels_follow_the_curve() {
        for level in 1..=4 {
            let x = generate(&GeneratorSpec::new(Shape::Boundary, 100, 1).with_level(level)).unwrap();
            for (j, &l) in x.labels().iter().enumerate() {
                let c = x.data().col(j);
                let above = c[1] > math::sin(level as f64 * c[0]);
                assert_eq!(above, l == 0);
            }
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(generate(&GeneratorSpec::new(Shape::Blobs, 1, 0)).is_err());
        assert!(generate(&GeneratorSpec::new(Shape::Boundary, 5, 0).with_level(5)).is_err());
        assert!(generate(&GeneratorSpec::new(Shape::Moons, 5, 0).with_noise(-1.0)).is_err());
        assert!("triangles".parse::<Shape>().is_err());
    }

    #[test]
    fn preprocessing_postconditions() {
        let x = generate(&GeneratorSpec::new(Shape::Blobs, 50, 3)).unwrap();
        let c = preprocess(&x, Preprocess::Center).unwrap();
        for v in c.data().column_mean() {
            assert!(v.abs() < 1e-12);
        }
        let l2 = preprocess(&x, Preprocess::L2Norm).unwrap();
        for col in l2.data().columns() {
            assert_relative_eq!(col.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        let st = FeatureStats::of(preprocess(&x, Preprocess::Standardize).unwrap().data());
        for f in 0..2 {
            assert!(st.mean[f].abs() < 1e-10);
            assert_relative_eq!(st.std[f], 1.0, epsilon = 1e-10);
        }
        let mm = FeatureStats::of(preprocess(&x, Preprocess::MinMax).unwrap().data());
        assert_eq!((mm.min[0], mm.max[0]), (0.0, 1.0));
        for p in Preprocess::ALL {
            let y = preprocess(&x, p).unwrap();
            assert_eq!(y.labels(), x.labels());
        }
    }

    #[test]
    fn degenerate_inputs_are_named() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 4.0, 4.0]]).unwrap();
        let x = LabeledMatrix::new(m, vec![0, 1, 1]).unwrap();
        assert_eq!(
            preprocess(&x, Preprocess::Standardize),
            Err(Error::DegenerateFeature { feature: 1 })
        );
        let m = Matrix::from_rows(&[[1.0, 0.0, 3.0], [4.0, 0.0, 4.0]]).unwrap();
        let x = LabeledMatrix::new(m, vec![0, 1, 1]).unwrap();
        assert_eq!(preprocess(&x, Preprocess::L2Norm), Err(Error::ZeroVector { sample: 1 }));
    }

    #[test]
    fn infinite_snr_is_identity() {
        let x = generate(&GeneratorSpec::new(Shape::Moons, 10, 0)).unwrap();
        assert_eq!(inject_noise_snr(&x, f64::INFINITY, 1, NoiseSplit::Equal).unwrap(), x);
    }

    #[test]
    fn zero_db_noise_matches_signal_power() {
        let x = gaussian_clusters(2, 5000, 3, 2.0, 1.0, 4).unwrap();
        let y = inject_noise_snr(&x, 0.0, 2, NoiseSplit::Equal).unwrap();
        let diff = Matrix::from_fn(3, x.len(), |i, j| y.data().get(i, j) - x.data().get(i, j));
        let ratio = signal_power(&diff) / signal_power(x.data());
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn proportional_split_follows_feature_power() {
        let m = Matrix::from_fn(2, 20000, |i, j| {
            if i == 0 {
                3.0
            } else if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let x = LabeledMatrix::new(m, (0..20000).map(|j| j % 2).collect()).unwrap();
        let y = inject_noise_snr(&x, 0.0, 5, NoiseSplit::Proportional).unwrap();
        let var = |f: usize| {
            y.data()
                .columns()
                .zip(x.data().columns())
                .map(|(a, b)| (a[f] - b[f]).powi(2))
                .sum::<f64>()
                / 20000.0
        };
        assert!((var(0) / var(1) - 9.0).abs() < 0.5);
    }

    #[test]
    fn zero_power_is_rejected() {
        let x = LabeledMatrix::new(Matrix::zeros(2, 4), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(
            inject_noise_snr(&x, 10.0, 0, NoiseSplit::Equal),
            Err(Error::ZeroSignalPower)
        );
    }

    #[test]
    fn taskset_levels_and_trials() {
        assert_eq!(
            snr_levels(5.0, 20.0, 16).unwrap(),
            (5..=20).map(f64::from).collect::<Vec<_>>()
        );
        let x = gaussian_clusters(3, 10, 4, 3.0, 1.0, 0).unwrap();
        let ts = build_snr_taskset(&x, 5.0, 20.0, 4, 2, 7, NoiseSplit::Equal).unwrap();
        assert_eq!(ts.tasks.len(), 4);
        assert!(ts.tasks.iter().all(|t| t.trials.len() == 2));
        assert_ne!(ts.tasks[0].trials[0], ts.tasks[0].trials[1]);
        assert_eq!(ts.tasks[1].trials[0].labels(), x.labels());
        let one = build_snr_taskset(&x, 5.0, 20.0, 4, 1, 7, NoiseSplit::Equal).unwrap();
        assert_eq!(one.tasks[2].trials[0], ts.tasks[2].trials[0]);
        assert!(matches!(
            build_snr_taskset(&x, 5.0, 20.0, 4, 0, 7, NoiseSplit::Equal),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(snr_levels(20.0, 5.0, 4), Err(Error::InvalidRange(_))));
        assert!(matches!(snr_levels(5.0, 20.0, 1), Err(Error::InvalidRange(_))));
    }
}
