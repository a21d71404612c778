//! Experiment machinery: SNR sweeps, task curves, sigmoid and polynomial
//! fitting, and ability estimation.

mod ability;
mod sigmoid;
mod sweep;

pub use ability::{
    assemble_task_curves, build_task_curves, estimate_ability, estimate_ability_on, fit_difficulty_polynomials,
    fit_task_sigmoids, quadratic_lstsq, AbilityEstimate, SvmFamily, TaskCurve, TaskCurveSet, TaskCurves,
    SATURATION_BAND, THETA_RESOLUTION,
};
pub use sigmoid::{fit_sigmoid, theta_grid, FitStatus, SigmoidFit, SigmoidParams, MAX_ITERATIONS, STEP_TOLERANCE};
pub use sweep::{
    aggregate, cell_indices, evaluate_cell, snr_sweep, task_accuracies, task_rs, train_models, SweepCell, SweepResult,
};

pub use crate::stats::{kendall_tau, pearson, spearman};
