//! SNR sweeps: train on clean data, test on noisy copies, average over trials.

use alloc::vec;
use alloc::vec::Vec;

use crate::classifiers::{predict, train, ClassifierSpec, TrainedModel};
use crate::coding::CodingConfig;
use crate::datagen::SnrTaskSet;
use crate::error::{Error, Result};
use crate::measures::rs_measure;
use crate::stats;

/// Outcome of one `(level, trial)` cell: one accuracy per model plus the RS
/// of the noisy test copy.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepCell {
    pub level: usize,
    pub trial: usize,
    pub accuracies: Vec<f64>,
    pub rs: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    pub snr_db: Vec<f64>,
    pub classifiers: Vec<ClassifierSpec>,
    /// `accuracy_mean[c][level]`.
    pub accuracy_mean: Vec<Vec<f64>>,
    pub accuracy_std: Vec<Vec<f64>>,
    pub rs_mean: Vec<f64>,
    pub rs_std: Vec<f64>,
    pub trials: usize,
}

impl SweepResult {
    /// Pearson correlation of each classifier's mean accuracy with `1 − RS`.
    pub fn correlations(&self) -> Result<Vec<f64>> {
        let sep: Vec<f64> = self.rs_mean.iter().map(|r| 1.0 - r).collect();
        self.accuracy_mean.iter().map(|acc| stats::pearson(acc, &sep)).collect()
    }
}

pub fn train_models(specs: &[ClassifierSpec], taskset: &SnrTaskSet) -> Result<Vec<TrainedModel>> {
    specs.iter().map(|s| train(s, &taskset.train)).collect()
}

pub fn evaluate_cell(
    models: &[TrainedModel],
    taskset: &SnrTaskSet,
    level: usize,
    trial: usize,
    config: &CodingConfig,
) -> Result<SweepCell> {
    let test = &taskset.tasks[level].trials[trial];
    let accuracies = models
        .iter()
        .map(|m| predict(m, test).map(|p| p.accuracy))
        .collect::<Result<_>>()?;
    Ok(SweepCell {
        level,
        trial,
        accuracies,
        rs: rs_measure(test, config)?,
    })
}

/// All `(level, trial)` pairs in the order [`aggregate`] expects.
pub fn cell_indices(taskset: &SnrTaskSet) -> Vec<(usize, usize)> {
    (0..taskset.tasks.len())
        .flat_map(|l| (0..taskset.trials).map(move |t| (l, t)))
        .collect()
}

/// Reduces cells (any order) into per-level means in fixed index order.
pub fn aggregate(taskset: &SnrTaskSet, specs: &[ClassifierSpec], mut cells: Vec<SweepCell>) -> Result<SweepResult> {
    let (n, t, c) = (taskset.tasks.len(), taskset.trials, specs.len());
    if cells.len() != n * t {
        return Err(Error::Shape(alloc::format!(
            "expected {} sweep cells, got {}",
            n * t,
            cells.len()
        )));
    }
    cells.sort_by_key(|cell| (cell.level, cell.trial));
    let mut accuracy_mean = vec![vec![0.0; n]; c];
    let mut accuracy_std = vec![vec![0.0; n]; c];
    let mut rs_mean = vec![0.0; n];
    let mut rs_std = vec![0.0; n];
    for (level, chunk) in cells.chunks(t).enumerate() {
        let rs: Vec<f64> = chunk.iter().map(|cell| cell.rs).collect();
        rs_mean[level] = stats::mean(&rs);
        rs_std[level] = stats::std_dev(&rs);
        for k in 0..c {
            let acc: Vec<f64> = chunk.iter().map(|cell| cell.accuracies[k]).collect();
            accuracy_mean[k][level] = stats::mean(&acc);
            accuracy_std[k][level] = stats::std_dev(&acc);
        }
    }
    Ok(SweepResult {
        snr_db: taskset.levels(),
        classifiers: specs.to_vec(),
        accuracy_mean,
        accuracy_std,
        rs_mean,
        rs_std,
        trials: t,
    })
}

/// Sequential sweep over every level and trial.
pub fn snr_sweep(taskset: &SnrTaskSet, specs: &[ClassifierSpec], config: &CodingConfig) -> Result<SweepResult> {
    let models = train_models(specs, taskset)?;
    let cells = cell_indices(taskset)
        .into_iter()
        .map(|(l, t)| evaluate_cell(&models, taskset, l, t, config))
        .collect::<Result<Vec<_>>>()?;
    aggregate(taskset, specs, cells)
}

/// Mean RS of the noisy copies at each level.
pub fn task_rs(taskset: &SnrTaskSet, config: &CodingConfig) -> Result<Vec<f64>> {
    taskset
        .tasks
        .iter()
        .map(|task| {
            let rs = task
                .trials
                .iter()
                .map(|x| rs_measure(x, config))
                .collect::<Result<Vec<_>>>()?;
            Ok(stats::mean(&rs))
        })
        .collect()
}

/// Mean accuracy of `model` on each task, averaged over trials.
pub fn task_accuracies(model: &TrainedModel, taskset: &SnrTaskSet) -> Result<Vec<f64>> {
    taskset
        .tasks
        .iter()
        .map(|task| {
            let acc = task
                .trials
                .iter()
                .map(|x| predict(model, x).map(|p| p.accuracy))
                .collect::<Result<Vec<_>>>()?;
            Ok(stats::mean(&acc))
        })
        .collect()
}
