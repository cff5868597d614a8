pub mod coherence;
pub mod entanglement;
pub mod error;
pub mod husimi;
pub mod linalg;
pub mod model;
pub mod report;
pub mod squeezing;
pub mod sweep;
pub mod thermo;
pub mod units;

pub use error::{Error, Result, ThresholdError};
