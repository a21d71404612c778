//! Per-layer separability of features exported from an external network.
//!
//! A [`FeatureDump`] holds one record per `(layer, epoch)` with a rank-2
//! (`n × d`) or rank-4 (`n × c × h × w`) row-major tensor, plus one label per
//! sample. Rank-4 records are flattened channel-major after optional 2×2
//! average pooling.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};

use crate::coding::{CodingConfig, Variant};
use crate::error::{Error, Result};
use crate::matrix::{LabeledMatrix, Matrix};
use crate::measures::rs_measure;
use crate::pool::{avg_pool_2x2, Tensor4};
use crate::rng::{rng_at, rng_from};

#[derive(Debug, Clone, PartialEq)]
pub struct LayerRecord {
    pub name: String,
    pub epoch: u32,
    /// `[n, d]` or `[n, c, h, w]`.
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl LayerRecord {
    pub fn new(name: impl Into<String>, epoch: u32, shape: Vec<usize>, data: Vec<f32>) -> Result<Self> {
        let rec = Self {
            name: name.into(),
            epoch,
            shape,
            data,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape.len() != 2 && self.shape.len() != 4 {
            return Err(Error::Shape(format!(
                "record `{}` has rank {}, expected 2 or 4",
                self.name,
                self.shape.len()
            )));
        }
        if self.shape.contains(&0) {
            return Err(Error::Shape(format!(
                "record `{}` has an empty dimension {:?}",
                self.name, self.shape
            )));
        }
        let len: usize = self.shape.iter().product();
        if len != self.data.len() {
            return Err(Error::Shape(format!(
                "record `{}` has {} values for shape {:?}",
                self.name,
                self.data.len(),
                self.shape
            )));
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.shape[0]
    }

    /// Feature dimension after optional pooling.
    pub fn dim(&self, pool: bool) -> usize {
        match (self.shape.as_slice(), pool) {
            ([_, c, h, w], true) => c * h.div_ceil(2) * w.div_ceil(2),
            (s, _) => s[1..].iter().product(),
        }
    }

    /// Feature matrix `d × n`, restricted to the columns in `keep`.
    pub fn features(&self, pool: bool, keep: &[usize]) -> Result<Matrix> {
        let n = self.samples();
        let d0: usize = self.shape[1..].iter().product();
        let pooled;
        let (src, d): (&[f64], usize) = if pool && self.shape.len() == 4 {
            let t = Tensor4::new(
                [n, self.shape[1], self.shape[2], self.shape[3]],
                self.data.iter().map(|&v| v as f64).collect(),
            )?;
            pooled = avg_pool_2x2(&t)?;
            (pooled.data(), pooled.sample_len())
        } else {
            pooled = Tensor4::new([n, d0, 1, 1], self.data.iter().map(|&v| v as f64).collect())?;
            (pooled.data(), d0)
        };
        let mut out = Vec::with_capacity(d * keep.len());
        for &i in keep {
            out.extend_from_slice(&src[i * d..(i + 1) * d]);
        }
        Matrix::from_col_major(d, keep.len(), out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDump {
    pub records: Vec<LayerRecord>,
    pub labels: Vec<u32>,
}

impl FeatureDump {
    pub fn new(records: Vec<LayerRecord>, labels: Vec<u32>) -> Result<Self> {
        let dump = Self { records, labels };
        dump.validate()?;
        Ok(dump)
    }

    /// Checks shapes, label count, epoch order and uniqueness of
    /// `(layer, epoch)` pairs.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        let mut seen = BTreeMap::new();
        let mut last_epoch = 0;
        for r in &self.records {
            r.validate()?;
            if r.samples() != n {
                return Err(Error::LabelCountMismatch {
                    expected: r.samples(),
                    found: n,
                });
            }
            if r.epoch < last_epoch {
                return Err(Error::InvalidSpec(format!(
                    "epochs must be non-decreasing in record order (`{}` epoch {} after {})",
                    r.name, r.epoch, last_epoch
                )));
            }
            last_epoch = r.epoch;
            if seen.insert((r.name.clone(), r.epoch), ()).is_some() {
                return Err(Error::InvalidSpec(format!(
                    "duplicate record `{}` epoch {}",
                    r.name, r.epoch
                )));
            }
        }
        Ok(())
    }

    /// Labels mapped to dense ids in ascending order of the raw values.
    pub fn dense_labels(&self) -> (Vec<usize>, usize) {
        let mut uniq = self.labels.clone();
        uniq.sort_unstable();
        uniq.dedup();
        let labels = self.labels.iter().map(|l| uniq.binary_search(l).unwrap_or(0)).collect();
        (labels, uniq.len())
    }
}

/// Compares names chunk by chunk, digit runs numerically (`layer2 < layer10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(p), Some(q)) if p.is_ascii_digit() && q.is_ascii_digit() => {
                let i = x.iter().position(|c| !c.is_ascii_digit()).unwrap_or(x.len());
                let j = y.iter().position(|c| !c.is_ascii_digit()).unwrap_or(y.len());
                let (dx, dy) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let ord = dx.len().cmp(&dy.len()).then_with(|| dx.cmp(dy));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(p), Some(q)) => {
                if p != q {
                    return p.cmp(q);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().position(|&c| c != b'0').unwrap_or(s.len());
    &s[k..]
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeConfig {
    pub coding: CodingConfig,
    pub pool: bool,
    /// Largest `n · d` evaluated per record before samples are subsampled.
    pub max_elements: usize,
    pub seed: u64,
    /// Which split the features came from (echoed only).
    pub split: Option<String>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            coding: CodingConfig::default(),
            pool: false,
            max_elements: 50_000_000,
            seed: 0,
            split: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Subsample {
    pub from: usize,
    pub to: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeEntry {
    pub layer: String,
    pub epoch: u32,
    pub dim: usize,
    pub rs: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerSummary {
    pub layer: String,
    pub final_epoch: u32,
    pub final_rs: f64,
    /// `max − min` of RS over the layer's epochs.
    pub delta_rs: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeReport {
    /// Sorted by layer (natural order), then epoch.
    pub entries: Vec<ProbeEntry>,
    pub layers: Vec<LayerSummary>,
    /// Layer names by final RS, highest first.
    pub final_order: Vec<String>,
    pub epsilon: f64,
    pub variant: Variant,
    pub pooled: bool,
    pub split: Option<String>,
    pub subsample: Option<Subsample>,
}

/// Everything shared by the per-record RS evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePlan {
    pub labels: Vec<usize>,
    pub classes: usize,
    /// Sample indices kept, ascending.
    pub keep: Vec<usize>,
    pub subsample: Option<Subsample>,
}

pub fn plan(dump: &FeatureDump, config: &ProbeConfig) -> Result<ProbePlan> {
    dump.validate()?;
    let (labels, classes) = dump.dense_labels();
    let n = labels.len();
    let d = dump
        .records
        .iter()
        .map(|r| r.dim(config.pool))
        .max()
        .unwrap_or(0)
        .max(1);
    let budget_n = (config.max_elements / d).max(2 * classes);
    if n <= budget_n {
        return Ok(ProbePlan {
            labels,
            classes,
            keep: (0..n).collect(),
            subsample: None,
        });
    }
    // Stratified: each class keeps a proportional share, at least one sample.
    let mut by_class = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut keep = Vec::with_capacity(budget_n);
    for (c, idx) in by_class.iter().enumerate() {
        let take = ((idx.len() * budget_n) / n).clamp(1, idx.len());
        let mut rng = rng_at(config.seed, &[0x5B, c as u64]);
        keep.extend(sample(&mut rng, idx.len(), take).into_iter().map(|j| idx[j]));
    }
    keep.sort_unstable();
    let to = keep.len();
    Ok(ProbePlan {
        labels,
        classes,
        keep,
        subsample: Some(Subsample {
            from: n,
            to,
            seed: config.seed,
        }),
    })
}

pub fn record_rs(record: &LayerRecord, plan: &ProbePlan, config: &ProbeConfig) -> Result<f64> {
    let x = record.features(config.pool, &plan.keep)?;
    let labels = plan.keep.iter().map(|&i| plan.labels[i]).collect();
    rs_measure(&LabeledMatrix::with_classes(x, labels, plan.classes)?, &config.coding)
}

/// Builds the report from one RS value per record (in record order).
pub fn assemble(dump: &FeatureDump, plan: &ProbePlan, config: &ProbeConfig, rs: &[f64]) -> ProbeReport {
    let mut entries: Vec<ProbeEntry> = dump
        .records
        .iter()
        .zip(rs)
        .map(|(r, &v)| ProbeEntry {
            layer: r.name.clone(),
            epoch: r.epoch,
            dim: r.dim(config.pool),
            rs: v,
        })
        .collect();
    entries.sort_by(|a, b| natural_cmp(&a.layer, &b.layer).then(a.epoch.cmp(&b.epoch)));
    let mut layers: Vec<LayerSummary> = Vec::new();
    for chunk in entries.chunk_by(|a, b| a.layer == b.layer) {
        let last = chunk.last().expect("chunks are nonempty");
        let hi = chunk.iter().map(|e| e.rs).fold(f64::NEG_INFINITY, f64::max);
        let lo = chunk.iter().map(|e| e.rs).fold(f64::INFINITY, f64::min);
        layers.push(LayerSummary {
            layer: last.layer.clone(),
            final_epoch: last.epoch,
            final_rs: last.rs,
            delta_rs: hi - lo,
        });
    }
    let mut order: Vec<&LayerSummary> = layers.iter().collect();
    order.sort_by(|a, b| {
        b.final_rs
            .total_cmp(&a.final_rs)
            .then_with(|| natural_cmp(&a.layer, &b.layer))
    });
    ProbeReport {
        final_order: order.iter().map(|l| l.layer.clone()).collect(),
        entries,
        layers,
        epsilon: config.coding.epsilon,
        variant: config.coding.variant,
        pooled: config.pool,
        split: config.split.clone(),
        subsample: plan.subsample.clone(),
    }
}

pub fn probe(dump: &FeatureDump, config: &ProbeConfig) -> Result<ProbeReport> {
    let plan = plan(dump, config)?;
    let rs = dump
        .records
        .iter()
        .map(|r| record_rs(r, &plan, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dump, &plan, config, &rs))
}

/// A dump whose class means drift apart over training, faster in deeper
/// layers: at epoch `e` of `E`, layer `t` (1-based) places class means at
/// distance `base · growth^(t·e/E)` from the origin along random directions,
/// with unit Gaussian noise. Every layer starts from the same separation.
pub fn synthetic_progressive_dump(
    layers: usize,
    epochs: u32,
    per_class: usize,
    classes: usize,
    dim: usize,
    seed: u64,
) -> Result<FeatureDump> {
    if layers == 0 || epochs == 0 || per_class < 2 || classes < 2 || dim == 0 {
        return Err(Error::InvalidSpec(
            "synthetic dump needs positive sizes and at least 2 classes".into(),
        ));
    }
    const BASE: f64 = 0.5;
    const GROWTH: f64 = 3.0;
    let n = per_class * classes;
    let mut rng = rng_from(seed);
    let dirs: Vec<Vec<f64>> = (0..classes)
        .map(|_| {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = crate::math::sqrt(v.iter().map(|x| x * x).sum());
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let labels: Vec<u32> = (0..n).map(|i| (i / per_class) as u32).collect();
    let mut records = Vec::new();
    for e in 0..=epochs {
        for t in 1..=layers {
            let sep = BASE * crate::math::powf(GROWTH, t as f64 * e as f64 / epochs as f64);
            let mut noise = rng_at(seed, &[t as u64, e as u64]);
            let mut data = Vec::with_capacity(n * dim);
            for &l in &labels {
                for &v in &dirs[l as usize] {
                    let z: f64 = StandardNormal.sample(&mut noise);
                    data.push((sep * v + z) as f32);
                }
            }
            records.push(LayerRecord::new(format!("layer{t}"), e, vec![n, dim], data)?);
        }
    }
    FeatureDump::new(records, labels)
}

impl core::fmt::Display for ProbeEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}@{}: {}", self.layer, self.epoch, self.rs)
    }
}

impl ProbeReport {
    pub fn layer(&self, name: &str) -> Option<&LayerSummary> {
        self.layers.iter().find(|l| l.layer == name)
    }

    pub fn layer_names(&self) -> Vec<String> {
        self.layers.iter().map(|l| l.layer.to_string()).collect()
    }
}
