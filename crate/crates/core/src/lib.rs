//! Data separability measures built on the lossy coding rate of a labeled
//! sample matrix, together with the distance-based baselines (DSI, N2, LSC,
//! Density) and the experiment machinery used to relate separability to
//! classifier accuracy.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command-line driver live in the `codesep` crate.
//!
//! Matrices follow the samples-as-columns convention: a dataset with `m`
//! samples of dimension `d` is a `d × m` [`Matrix`], and a [`LabeledMatrix`]
//! pairs it with one class id per column.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

extern crate alloc;

mod error;
mod math;
mod matrix;

pub mod classifiers;
pub mod coding;
pub mod datagen;
pub mod harness;
pub mod measures;
pub mod pool;
pub mod probe;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use matrix::{LabeledMatrix, Matrix};

pub use coding::{CodingConfig, Variant};
pub use measures::{MeasureConfig, MeasureReport};
