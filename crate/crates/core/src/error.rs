use thiserror::Error;

use crate::metric::MetricError;
use crate::net::NetError;
use crate::oracles::OracleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<NetError> for SolveError {
    fn from(e: NetError) -> Self {
        SolveError::Internal(e.to_string())
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<(), SolveError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(SolveError::InvalidParameter(format!("epsilon must lie in (0, 1], got {eps}")))
    }
}

pub(crate) fn check_k(k: usize) -> Result<(), SolveError> {
    if k >= 1 {
        Ok(())
    } else {
        Err(SolveError::InvalidParameter("k must be at least 1".into()))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), SolveError> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(SolveError::InvalidParameter(format!("alpha must be a finite number >= 1, got {alpha}")))
    }
}
