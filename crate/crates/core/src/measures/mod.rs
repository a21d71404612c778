//! Data separability measures. Every measure maps into `[0, 1]` with low
//! values meaning well-separated classes.

mod distance;
mod ks;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use distance::{euclidean, DistanceCache, DistanceRows, Neighbors, StreamingDistances, DENSE_CAP};
pub use ks::{ks_statistic, ks_statistic_sorted, ks_two_sample};

use crate::coding::{coding_rate, per_class_coding_rate, CodingConfig, Variant};
use crate::error::{Error, Result};
use crate::matrix::{LabeledMatrix, Matrix};

/// Default Density graph threshold.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.15;

/// Which points count as the "nearest neighbor" in N2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NeighborScope {
    #[default]
    SameClass,
    Any,
}

/// Feature scaling applied before building the Density graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DensityScaling {
    #[default]
    Raw,
    MinMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DistanceMode {
    /// Dense cache when `m ≤ DENSE_CAP`, otherwise an error.
    #[default]
    Dense,
    /// Recompute rows on the fly.
    Streaming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MeasureKind {
    Rs,
    Dsi,
    N2,
    Lsc,
    Density,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::Rs,
        MeasureKind::Dsi,
        MeasureKind::N2,
        MeasureKind::Lsc,
        MeasureKind::Density,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Rs => "rs",
            MeasureKind::Dsi => "dsi",
            MeasureKind::N2 => "n2",
            MeasureKind::Lsc => "lsc",
            MeasureKind::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureConfig {
    pub coding: CodingConfig,
    pub density_threshold: f64,
    pub density_scaling: DensityScaling,
    pub n2_neighbor: NeighborScope,
    pub distance_mode: DistanceMode,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            coding: CodingConfig::default(),
            density_threshold: DEFAULT_DENSITY_THRESHOLD,
            density_scaling: DensityScaling::Raw,
            n2_neighbor: NeighborScope::SameClass,
            distance_mode: DistanceMode::Dense,
        }
    }
}

/// Ratio of the per-class coding rate to the whole-dataset coding rate.
pub fn rs_measure(x: &LabeledMatrix, config: &CodingConfig) -> Result<f64> {
    let total = coding_rate(x.data(), config)?;
    if !(total > 0.0) {
        return Err(Error::ZeroTotalRate);
    }
    Ok(per_class_coding_rate(x, config)? / total)
}

fn require_two_classes(x: &LabeledMatrix) -> Result<()> {
    if x.classes() < 2 {
        Err(Error::SingleClass)
    } else {
        Ok(())
    }
}

/// One minus the mean (over classes) KS distance between the intra-class and
/// class-to-rest distance distributions.
pub fn dsi_measure(x: &LabeledMatrix) -> Result<f64> {
    dsi_with(x, &DistanceCache::new(x.data(), x.labels())?)
}

pub fn dsi_with<D: DistanceRows + ?Sized>(x: &LabeledMatrix, rows: &D) -> Result<f64> {
    require_two_classes(x)?;
    let labels = x.labels();
    let counts = x.class_counts();
    if let Some(class) = counts.iter().position(|&c| c < 2) {
        return Err(Error::DegenerateClass {
            class,
            count: counts[class],
        });
    }
    let m = x.len();
    let mut intra: Vec<Vec<f64>> = counts.iter().map(|&c| Vec::with_capacity(c * (c - 1) / 2)).collect();
    let mut inter: Vec<Vec<f64>> = counts.iter().map(|&c| Vec::with_capacity(c * (m - c))).collect();
    let mut scratch = Vec::new();
    for i in 0..m {
        let li = labels[i];
        let row = rows.row(i, &mut scratch);
        for (j, &d) in row.iter().enumerate() {
            if labels[j] == li {
                if j > i {
                    intra[li].push(d);
                }
            } else {
                inter[li].push(d);
            }
        }
    }
    let k = x.classes();
    let mut sum = 0.0;
    for (a, b) in intra.iter_mut().zip(inter.iter_mut()) {
        sum += ks_statistic(a, b);
    }
    Ok(1.0 - sum / k as f64)
}

/// `1 − 1/(1 + r)` where `r` is the ratio of summed nearest-neighbor to summed
/// nearest-enemy distances. Coincident enemies (`Σ NE = 0`) give 1.
pub fn n2_measure(x: &LabeledMatrix, scope: NeighborScope) -> Result<f64> {
    let cache = DistanceCache::new(x.data(), x.labels())?;
    n2_from_neighbors(x, cache.neighbors(), scope)
}

pub fn n2_from_neighbors(x: &LabeledMatrix, nb: &Neighbors, scope: NeighborScope) -> Result<f64> {
    require_two_classes(x)?;
    if scope == NeighborScope::SameClass {
        let counts = x.class_counts();
        if let Some(class) = counts.iter().position(|&c| c < 2) {
            return Err(Error::DegenerateClass {
                class,
                count: counts[class],
            });
        }
    }
    let near = match scope {
        NeighborScope::SameClass => &nb.same_class_dist,
        NeighborScope::Any => &nb.any_dist,
    };
    let num: f64 = near.iter().sum();
    let den: f64 = nb.enemy_dist.iter().sum();
    if den == 0.0 {
        return Ok(1.0);
    }
    let raw = num / den;
    Ok(1.0 - 1.0 / (1.0 + raw))
}

/// `1 − Σ|LS(xᵢ)| / m²`, where the local set holds the points strictly closer
/// to `xᵢ` than its nearest enemy.
pub fn lsc_measure(x: &LabeledMatrix) -> Result<f64> {
    let cache = DistanceCache::new(x.data(), x.labels())?;
    lsc_with(x, &cache, cache.neighbors())
}

pub fn lsc_with<D: DistanceRows + ?Sized>(x: &LabeledMatrix, rows: &D, nb: &Neighbors) -> Result<f64> {
    require_two_classes(x)?;
    let m = x.len();
    let mut scratch = Vec::new();
    let mut total = 0usize;
    for i in 0..m {
        let radius = nb.enemy_dist[i];
        let row = rows.row(i, &mut scratch);
        total += row.iter().enumerate().filter(|&(j, &d)| j != i && d < radius).count();
    }
    Ok(1.0 - total as f64 / (m as f64 * m as f64))
}

/// `1 − 2|E| / (m(m−1))` for the graph joining points closer than `threshold`.
pub fn density_measure(x: &LabeledMatrix, threshold: f64, scaling: DensityScaling) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument("density threshold must be positive".into()));
    }
    match scaling {
        DensityScaling::Raw => Ok(density_with(&StreamingDistances::new(x.data()), threshold)),
        DensityScaling::MinMax => {
            let scaled = min_max_scaled(x.data());
            Ok(density_with(&StreamingDistances::new(&scaled), threshold))
        }
    }
}

pub fn density_with<D: DistanceRows + ?Sized>(rows: &D, threshold: f64) -> f64 {
    let m = rows.len();
    let mut scratch = Vec::new();
    let mut edges = 0usize;
    for i in 0..m {
        let row = rows.row(i, &mut scratch);
        edges += row[i + 1..].iter().filter(|&&d| d < threshold).count();
    }
    1.0 - 2.0 * edges as f64 / (m as f64 * (m as f64 - 1.0))
}

/// Per-feature min-max scaling to `[0, 1]`; constant features map to 0.
pub fn min_max_scaled(x: &Matrix) -> Matrix {
    let d = x.rows();
    let mut lo = alloc::vec![f64::INFINITY; d];
    let mut hi = alloc::vec![f64::NEG_INFINITY; d];
    for c in x.columns() {
        for (f, &v) in c.iter().enumerate() {
            lo[f] = lo[f].min(v);
            hi[f] = hi[f].max(v);
        }
    }
    let mut out = x.clone();
    for j in 0..out.cols() {
        for (f, v) in out.col_mut(j).iter_mut().enumerate() {
            let range = hi[f] - lo[f];
            *v = if range > 0.0 { (*v - lo[f]) / range } else { 0.0 };
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureSelection {
    pub rs: bool,
    pub dsi: bool,
    pub n2: bool,
    pub lsc: bool,
    pub density: bool,
}

impl MeasureSelection {
    pub const ALL: Self = Self {
        rs: true,
        dsi: true,
        n2: true,
        lsc: true,
        density: true,
    };
    pub const NONE: Self = Self {
        rs: false,
        dsi: false,
        n2: false,
        lsc: false,
        density: false,
    };

    pub fn contains(&self, kind: MeasureKind) -> bool {
        match kind {
            MeasureKind::Rs => self.rs,
            MeasureKind::Dsi => self.dsi,
            MeasureKind::N2 => self.n2,
            MeasureKind::Lsc => self.lsc,
            MeasureKind::Density => self.density,
        }
    }

    fn needs_distances(&self) -> bool {
        self.dsi || self.n2 || self.lsc
    }
}

impl Default for MeasureSelection {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureFailure {
    pub measure: MeasureKind,
    pub error: String,
    pub message: String,
}

/// Values of the selected measures for one dataset, with the configuration
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureReport {
    pub dataset_id: String,
    pub rs: Option<f64>,
    pub dsi: Option<f64>,
    pub n2: Option<f64>,
    pub lsc: Option<f64>,
    pub density: Option<f64>,
    pub failures: Vec<MeasureFailure>,
    pub epsilon: f64,
    pub variant: Variant,
    pub density_threshold: f64,
    pub density_scaling: DensityScaling,
    pub n2_neighbor: NeighborScope,
    pub timestamp: Option<String>,
}

impl MeasureReport {
    pub fn empty(dataset_id: &str, config: &MeasureConfig) -> Self {
        Self {
            dataset_id: dataset_id.to_string(),
            rs: None,
            dsi: None,
            n2: None,
            lsc: None,
            density: None,
            failures: Vec::new(),
            epsilon: config.coding.epsilon,
            variant: config.coding.variant,
            density_threshold: config.density_threshold,
            density_scaling: config.density_scaling,
            n2_neighbor: config.n2_neighbor,
            timestamp: None,
        }
    }

    pub fn get(&self, kind: MeasureKind) -> Option<f64> {
        match kind {
            MeasureKind::Rs => self.rs,
            MeasureKind::Dsi => self.dsi,
            MeasureKind::N2 => self.n2,
            MeasureKind::Lsc => self.lsc,
            MeasureKind::Density => self.density,
        }
    }

    fn record(&mut self, kind: MeasureKind, value: Result<f64>) {
        match value {
            Ok(v) => {
                let slot = match kind {
                    MeasureKind::Rs => &mut self.rs,
                    MeasureKind::Dsi => &mut self.dsi,
                    MeasureKind::N2 => &mut self.n2,
                    MeasureKind::Lsc => &mut self.lsc,
                    MeasureKind::Density => &mut self.density,
                };
                *slot = Some(v);
            }
            Err(e) => self.failures.push(MeasureFailure {
                measure: kind,
                error: e.code().to_string(),
                message: e.to_string(),
            }),
        }
    }

    pub fn failure(&self, kind: MeasureKind) -> Option<&MeasureFailure> {
        self.failures.iter().find(|f| f.measure == kind)
    }
}

/// Runs the selected measures. A failing measure is recorded in
/// `failures` and does not stop the others.
pub fn measure_all(
    dataset_id: &str,
    x: &LabeledMatrix,
    config: &MeasureConfig,
    selection: MeasureSelection,
) -> MeasureReport {
    let mut report = MeasureReport::empty(dataset_id, config);
    if selection.rs {
        report.record(MeasureKind::Rs, rs_measure(x, &config.coding));
    }
    if selection.needs_distances() {
        let run = |report: &mut MeasureReport, rows: &dyn DistanceRows, nb: &Neighbors| {
            if selection.dsi {
                report.record(MeasureKind::Dsi, dsi_with(x, rows));
            }
            if selection.n2 {
                report.record(MeasureKind::N2, n2_from_neighbors(x, nb, config.n2_neighbor));
            }
            if selection.lsc {
                report.record(MeasureKind::Lsc, lsc_with(x, rows, nb));
            }
        };
        match config.distance_mode {
            DistanceMode::Dense => match DistanceCache::new(x.data(), x.labels()) {
                Ok(cache) => run(&mut report, &cache, cache.neighbors()),
                Err(e) => {
                    for kind in [MeasureKind::Dsi, MeasureKind::N2, MeasureKind::Lsc] {
                        if selection.contains(kind) {
                            report.record(kind, Err(e.clone()));
                        }
                    }
                }
            },
            DistanceMode::Streaming => {
                let rows = StreamingDistances::new(x.data());
                let nb = Neighbors::compute(&rows, x.labels());
                run(&mut report, &rows, &nb);
            }
        }
    }
    if selection.density {
        report.record(
            MeasureKind::Density,
            density_measure(x, config.density_threshold, config.density_scaling),
        );
    }
    report
}

#[cfg(test)]
mod tests;
