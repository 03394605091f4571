pub mod dataset;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod format;
pub mod forest;
pub mod preprocess;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
