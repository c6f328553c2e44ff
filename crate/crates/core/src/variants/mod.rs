//! Constrained and generalized objectives built on the core solvers.

mod fair;
mod kcenter;
mod matching;

pub use fair::{bipartite_center_matching, fair_msr_approx, fair_msr_report};
pub use kcenter::{exact_kcenter, k_center_approx};
pub use matching::hopcroft_karp;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::metric::{BallSolution, MetricSpace, PointId};
use crate::msr::msr_report;

/// Predicate every cluster of a constrained partition must satisfy.
pub trait ClusterConstraint: Sync {
    fn accepts(&self, members: &[PointId]) -> bool;
}

impl<F> ClusterConstraint for F
where
    F: Fn(&[PointId]) -> bool + Sync,
{
    fn accepts(&self, members: &[PointId]) -> bool {
        self(members)
    }
}

/// Color classes with a cap on the number of centers drawn from each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairSpec {
    pub colors: Vec<usize>,
    pub caps: Vec<usize>,
}

impl FairSpec {
    pub fn k(&self) -> usize {
        self.caps.iter().sum()
    }

    pub fn validate(&self, n: usize) -> Result<(), SolveError> {
        if self.colors.len() != n {
            return Err(SolveError::InvalidParameter(format!(
                "{} colors given for {n} points",
                self.colors.len()
            )));
        }
        if let Some(&c) = self.colors.iter().find(|&&c| c >= self.caps.len()) {
            return Err(SolveError::InvalidParameter(format!("color {c} has no cap")));
        }
        if self.k() == 0 {
            return Err(SolveError::InvalidParameter("caps sum to zero".into()));
        }
        Ok(())
    }
}

/// Two-coloring plus the minimum ratio each cluster must keep between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceSpec {
    pub coloring: Vec<usize>,
    pub b: f64,
}

impl BalanceSpec {
    pub fn validate(&self, n: usize) -> Result<(), SolveError> {
        if self.coloring.len() != n {
            return Err(SolveError::InvalidParameter(format!(
                "{} colors given for {n} points",
                self.coloring.len()
            )));
        }
        if self.coloring.iter().any(|&c| c > 1) {
            return Err(SolveError::InvalidParameter("balance colors must be 0 or 1".into()));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(SolveError::InvalidParameter(format!("b must lie in [0, 1], got {}", self.b)));
        }
        Ok(())
    }
}

impl ClusterConstraint for BalanceSpec {
    fn accepts(&self, members: &[PointId]) -> bool {
        let ones = members.iter().filter(|&&p| self.coloring[p] == 1).count();
        let zeros = members.len() - ones;
        let ratio = match (zeros, ones) {
            (0, 0) => return true,
            (0, _) | (_, 0) => 0.0,
            (a, b) => (a.min(b) as f64) / (a.max(b) as f64),
        };
        ratio >= self.b
    }
}

/// Cluster predicate for b-balanced clusters.
pub fn balanced_validator(spec: BalanceSpec) -> impl ClusterConstraint {
    spec
}

/// Min-sum of radii raised to `alpha`, with up to `g` outliers.
pub fn alpha_msr_approx(space: &MetricSpace, k: usize, alpha: f64, eps: f64, g: usize) -> Result<BallSolution, SolveError> {
    msr_report(space, k, eps, g, alpha).map(|r| r.solution)
}
