//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("matrix is not unitary: residual {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("parameter slice out of range: {0}")]
    IndexOutOfRange(String),

    #[error("coefficient matrix is rank deficient: rank {rank}, need {need}")]
    RankDeficient { rank: usize, need: usize },

    #[error("no restart produced a full-rank POVM set ({restarts} tried)")]
    NoFeasiblePoint { restarts: usize },

    #[error("Pauli coverage not achieved even at {layers} circuit layers")]
    CoverageNeverAchieved { layers: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
