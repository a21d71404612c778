//! Rayon-backed drivers for the core experiment steps. Every parallel map
//! collects in index order, so results match the sequential versions exactly.

use rayon::prelude::*;

use codesep_core::classifiers::{train, ClassifierSpec};
use codesep_core::coding::CodingConfig;
use codesep_core::datagen::SnrTaskSet;
use codesep_core::harness::{self, SweepResult, TaskCurves};
use codesep_core::measures::{measure_all, MeasureConfig, MeasureReport, MeasureSelection};
use codesep_core::probe::{self, FeatureDump, ProbeConfig, ProbeReport};
use codesep_core::{LabeledMatrix, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CODESEP_THREADS";

/// Sizes the global pool from `CODESEP_THREADS` if it is set. Safe to call
/// more than once; only the first call takes effect.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn snr_sweep(taskset: &SnrTaskSet, specs: &[ClassifierSpec], config: &CodingConfig) -> Result<SweepResult> {
    let models = specs
        .par_iter()
        .map(|s| train(s, &taskset.train))
        .collect::<Result<Vec<_>>>()?;
    let cells = harness::cell_indices(taskset)
        .into_par_iter()
        .map(|(l, t)| harness::evaluate_cell(&models, taskset, l, t, config))
        .collect::<Result<Vec<_>>>()?;
    harness::aggregate(taskset, specs, cells)
}

pub fn task_rs(taskset: &SnrTaskSet, config: &CodingConfig) -> Result<Vec<f64>> {
    taskset
        .tasks
        .par_iter()
        .map(|task| {
            let rs = task
                .trials
                .iter()
                .map(|x| codesep_core::measures::rs_measure(x, config))
                .collect::<Result<Vec<_>>>()?;
            Ok(codesep_core::stats::mean(&rs))
        })
        .collect()
}

pub fn build_task_curves(specs: &[ClassifierSpec], taskset: &SnrTaskSet) -> Result<TaskCurves> {
    let columns = specs
        .par_iter()
        .map(|s| harness::task_accuracies(&train(s, &taskset.train)?, taskset))
        .collect::<Result<Vec<_>>>()?;
    harness::assemble_task_curves(specs, columns)
}

pub fn probe(dump: &FeatureDump, config: &ProbeConfig) -> Result<ProbeReport> {
    let plan = probe::plan(dump, config)?;
    let rs = dump
        .records
        .par_iter()
        .map(|r| probe::record_rs(r, &plan, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(probe::assemble(dump, &plan, config, &rs))
}

/// Measures several datasets at once.
pub fn measure_many(
    datasets: &[(String, LabeledMatrix)],
    config: &MeasureConfig,
    selection: MeasureSelection,
) -> Vec<MeasureReport> {
    datasets
        .par_iter()
        .map(|(id, x)| measure_all(id, x, config, selection))
        .collect()
}
