//! Exact and approximate min-sum-radii and min-sum-diameters clustering on
//! finite metric spaces.

mod bits;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod instance;
pub(crate) mod local;
pub mod metric;
pub mod msd;
pub mod msr;
pub mod net;
pub mod oracles;
pub(crate) mod pipeline;
pub mod solve;
pub mod tables;
pub mod variants;
pub mod verify;

pub use error::SolveError;
pub use metric::{Ball, BallSolution, Cluster, MetricError, MetricSpace, PartitionSolution, PointId};
pub use pipeline::{ComponentSummary, CALIBRATION};
