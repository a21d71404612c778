//! File formats, reports, parallel drivers and the command-line interface
//! for [`codesep_core`].

pub use codesep_core;

pub mod cli;
pub mod delimited;
pub mod dump;
pub mod error;
pub mod model_io;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
