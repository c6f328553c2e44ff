//! Instance and solution documents.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{Ball, Cluster, MetricError, MetricSpace, PointId};
use crate::pipeline::ComponentSummary;
use crate::variants::{BalanceSpec, FairSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// On-disk instance: either coordinates or a distance matrix, plus optional
/// color data.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balance: Option<BalanceSpec>,
    /// Set by the grid-tiling generator: whether the source tiling is solvable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiling_feasible: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub space: MetricSpace,
    pub fair: Option<FairSpec>,
    pub balance: Option<BalanceSpec>,
    pub file: InstanceFile,
}

impl InstanceFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<Instance, InstanceError> {
        let space = match (&self.points, &self.matrix) {
            (Some(p), None) => MetricSpace::from_points(p.clone())?,
            (None, Some(m)) => MetricSpace::from_matrix(m.clone())?,
            _ => return Err(InstanceError::Shape("exactly one of \"points\" or \"matrix\" is required".into())),
        };
        let n = space.len();
        let fair = match (&self.colors, &self.caps) {
            (Some(colors), Some(caps)) => {
                let f = FairSpec { colors: colors.clone(), caps: caps.clone() };
                f.validate(n).map_err(|e| InstanceError::Shape(e.to_string()))?;
                Some(f)
            }
            (None, None) => None,
            (Some(c), None) => {
                if c.len() != n {
                    return Err(InstanceError::Shape(format!("{} colors given for {n} points", c.len())));
                }
                None
            }
            (None, Some(_)) => return Err(InstanceError::Shape("\"caps\" needs \"colors\"".into())),
        };
        if let Some(b) = &self.balance {
            b.validate(n).map_err(|e| InstanceError::Shape(e.to_string()))?;
        }
        Ok(Instance { space, fair, balance: self.balance.clone(), file: self.clone() })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Syntax(e.to_string()))?;
    file.load()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Msr,
    Msd,
    AlphaMsr,
    KCenter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Approx,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub k: usize,
    pub g: usize,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub fair: bool,
    #[serde(default)]
    pub balance: bool,
}

/// A solved instance as written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub variant: Variant,
    pub mode: Mode,
    pub parameters: Parameters,
    pub cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balls: Option<Vec<Ball>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<Cluster>>,
    pub outliers: Vec<PointId>,
    #[serde(default)]
    pub components: Vec<ComponentSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl SolutionDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Syntax(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let i = parse_instance(r#"{"points": [[0],[1],[10],[11]]}"#).unwrap();
        assert_eq!(i.space.len(), 4);
        assert_eq!(i.space.distance(2, 3), 1.0);
        let bad = parse_instance(r#"{"matrix": [[0,1,5],[1,0,1],[5,1,0]]}"#).unwrap_err();
        assert_eq!(bad, InstanceError::Metric(MetricError::Triangle { a: 0, via: 1, b: 2 }));
        assert_eq!(parse_instance(r#"{"matrix": [[0]]}"#).unwrap().space.len(), 1);
        assert!(matches!(parse_instance("{"), Err(InstanceError::Syntax(_))));
        assert!(matches!(parse_instance(r#"{"points": [[0]], "matrix": [[0]]}"#), Err(InstanceError::Shape(_))));
        assert!(matches!(parse_instance(r#"{"points": [[0],[1,2]]}"#), Err(InstanceError::Metric(_))));
        let f = parse_instance(r#"{"points": [[0],[1]], "colors": [0,1], "caps": [1,1]}"#).unwrap();
        assert_eq!(f.fair.unwrap().k(), 2);
    }

    proptest! {
        #[test]
        fn instances_round_trip(pts in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..8)) {
            let file = InstanceFile { points: Some(pts), ..Default::default() };
            let back: InstanceFile = serde_json::from_str(&file.to_json()).unwrap();
            prop_assert_eq!(back, file);
        }

        #[test]
        fn solutions_round_trip(radii in prop::collection::vec(0.0f64..1e3, 0..5), cost in 0.0f64..1e9) {
            let doc = SolutionDocument {
                variant: Variant::Msr,
                mode: Mode::Approx,
                parameters: Parameters { k: 3, g: 0, alpha: 1.0, epsilon: Some(0.1), fair: false, balance: false },
                cost,
                balls: Some(radii.iter().enumerate().map(|(center, &radius)| Ball { center, radius }).collect()),
                clusters: None,
                outliers: vec![],
                components: vec![],
                wall_time_ms: None,
            };
            prop_assert_eq!(SolutionDocument::from_json(&doc.to_json()).unwrap(), doc);
        }
    }
}
