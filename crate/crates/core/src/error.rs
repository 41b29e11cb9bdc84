use thiserror::Error;

use crate::weights::WeightKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "alpha = {0} is outside (0, 1); the Cole-Cole relaxation order must satisfy 0 < alpha < 1"
    )]
    InvalidAlpha(f64),
    #[error(
        "theta = {0} is outside (0, 1/2]; the shifted trapezoidal weights require 0 < theta <= 1/2"
    )]
    InvalidTheta(f64),
    #[error("expected a {expected:?} weight sequence, got {found:?}")]
    KindMismatch {
        expected: WeightKind,
        found: WeightKind,
    },
    #[error("truncation K = {k} leaves tail bound {bound:e} above the allowed {limit:e}")]
    TruncationTooShort { k: usize, bound: f64, limit: f64 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("history holds {found} entries, expected {expected}")]
    HistoryMismatch { expected: usize, found: usize },
    #[error("weight sequence parameters do not match the simulation: {0}")]
    ParamMismatch(String),
    #[error("conjugate gradients stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
