use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThresholdError {
    #[error("quantity is zero on the whole scan range [{t_min}, {t_max}]")]
    IdenticallyZero { t_min: f64, t_max: f64 },
    #[error("quantity is still positive at the end of the scan range (T = {t_max})")]
    NotTerminated { t_max: f64 },
    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("ground state is degenerate at this field ({0})")]
    Degenerate(String),
    #[error("quantity is not defined at T = 0: {0}")]
    ZeroTemperature(&'static str),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")))
    }
}
