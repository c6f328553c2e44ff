//! Finite metric spaces, balls, solutions and their costs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense index of a point, `0..n`.
pub type PointId = usize;

/// Relative slack allowed when checking the triangle inequality of an
/// explicit matrix, to absorb rounding in matrices produced by summation.
const TRIANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("matrix row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("coordinate vector {index} has dimension {got}, expected {expected}")]
    Ragged { index: usize, got: usize, expected: usize },
    #[error("distance d({a},{b}) = {value} is not a finite nonnegative number")]
    BadEntry { a: usize, b: usize, value: f64 },
    #[error("diagonal entry d({a},{a}) = {value} is not zero")]
    NonzeroDiagonal { a: usize, value: f64 },
    #[error("matrix is not symmetric: d({a},{b}) != d({b},{a})")]
    Asymmetric { a: usize, b: usize },
    #[error("distinct points {a} and {b} are at distance 0")]
    Coincident { a: usize, b: usize },
    #[error("triangle inequality violated: d({a},{b}) > d({a},{via}) + d({via},{b})")]
    Triangle { a: usize, via: usize, b: usize },
    #[error("point {index} out of range for a space of {n} points")]
    OutOfRange { index: usize, n: usize },
    #[error("subset is empty")]
    EmptySubset,
    #[error("expected a nonnegative number, got {0}")]
    Negative(f64),
}

#[derive(Debug, Clone)]
enum Repr {
    Matrix(Vec<f64>),
    Euclidean { dim: usize, coords: Vec<f64> },
}

/// A finite metric space, either an explicit distance matrix or points in
/// Euclidean space. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    n: usize,
    repr: Repr,
    diameter: f64,
    min_distance: f64,
}

impl MetricSpace {
    /// Builds a space from a full distance matrix, checking every metric axiom
    /// including all n³ triangle inequalities.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare { row, len: r.len(), n });
            }
            for (col, &v) in r.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(MetricError::BadEntry { a: row, b: col, value: v });
                }
            }
            flat.extend_from_slice(r);
        }
        let at = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if at(a, a) != 0.0 {
                return Err(MetricError::NonzeroDiagonal { a, value: at(a, a) });
            }
            for b in a + 1..n {
                if at(a, b) != at(b, a) {
                    return Err(MetricError::Asymmetric { a, b });
                }
                if at(a, b) == 0.0 {
                    return Err(MetricError::Coincident { a, b });
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let direct = at(a, b);
                for via in 0..n {
                    if via == a || via == b {
                        continue;
                    }
                    let detour = at(a, via) + at(via, b);
                    if direct > detour * (1.0 + TRIANGLE_SLACK) {
                        return Err(MetricError::Triangle { a, via, b });
                    }
                }
            }
        }
        Ok(Self::finish(n, Repr::Matrix(flat)))
    }

    /// Builds a Euclidean space from coordinate vectors of equal dimension.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = points.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let dim = points[0].len();
        let mut coords = Vec::with_capacity(n * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::Ragged { index, got: p.len(), expected: dim });
            }
            if let Some(&bad) = p.iter().find(|v| !v.is_finite()) {
                return Err(MetricError::BadEntry { a: index, b: index, value: bad });
            }
            coords.extend_from_slice(p);
        }
        let space = Self::finish(n, Repr::Euclidean { dim, coords });
        for a in 0..n {
            for b in a + 1..n {
                if space.distance(a, b) == 0.0 {
                    return Err(MetricError::Coincident { a, b });
                }
            }
        }
        Ok(space)
    }

    fn finish(n: usize, repr: Repr) -> Self {
        let mut space = MetricSpace { n, repr, diameter: 0.0, min_distance: 0.0 };
        let mut diam = 0.0f64;
        let mut min = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                let d = space.distance(a, b);
                diam = diam.max(d);
                min = min.min(d);
            }
        }
        space.diameter = diam;
        space.min_distance = if n > 1 { min } else { 0.0 };
        space
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// d(a, b). Panics when an index is out of range; see [`Self::try_distance`].
    #[inline]
    pub fn distance(&self, a: PointId, b: PointId) -> f64 {
        match &self.repr {
            Repr::Matrix(m) => m[a * self.n + b],
            Repr::Euclidean { dim, coords } => {
                let (pa, pb) = (&coords[a * dim..(a + 1) * dim], &coords[b * dim..(b + 1) * dim]);
                pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
        }
    }

    pub fn try_distance(&self, a: PointId, b: PointId) -> Result<f64, MetricError> {
        for index in [a, b] {
            if index >= self.n {
                return Err(MetricError::OutOfRange { index, n: self.n });
            }
        }
        Ok(self.distance(a, b))
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Smallest distance between distinct points (0 for a single point).
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// Diameter over minimum inter-point distance; 1 for a single point.
    pub fn aspect_ratio(&self) -> f64 {
        if self.n < 2 {
            1.0
        } else {
            self.diameter / self.min_distance
        }
    }

    /// Coordinates when the space is Euclidean.
    pub fn coordinates(&self) -> Option<(usize, &[f64])> {
        match &self.repr {
            Repr::Euclidean { dim, coords } => Some((*dim, coords)),
            Repr::Matrix(_) => None,
        }
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.distance(a, b)).collect()).collect()
    }

    /// Largest pairwise distance within `subset`.
    pub fn subset_diameter(&self, subset: &[PointId]) -> Result<f64, MetricError> {
        if subset.is_empty() {
            return Err(MetricError::EmptySubset);
        }
        for &p in subset {
            if p >= self.n {
                return Err(MetricError::OutOfRange { index: p, n: self.n });
            }
        }
        Ok(self.diam_unchecked(subset))
    }

    pub(crate) fn diam_unchecked(&self, subset: &[PointId]) -> f64 {
        let mut diam = 0.0f64;
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                diam = diam.max(self.distance(a, b));
            }
        }
        diam
    }

    /// Points of `restrict` (default: all points) within `radius` of `center`.
    pub fn ball_members(
        &self,
        center: PointId,
        radius: f64,
        restrict: Option<&[PointId]>,
    ) -> Vec<PointId> {
        match restrict {
            Some(set) => set.iter().copied().filter(|&y| self.distance(center, y) <= radius).collect(),
            None => (0..self.n).filter(|&y| self.distance(center, y) <= radius).collect(),
        }
    }

    /// Smallest distance between two point sets.
    pub fn set_distance(&self, a: &[PointId], b: &[PointId]) -> f64 {
        let mut best = f64::INFINITY;
        for &x in a {
            for &y in b {
                best = best.min(self.distance(x, y));
            }
        }
        best
    }
}

/// ⟦x⟧ = 2^⌈log₂ x⌉ for x > 0 and ⟦0⟧ = 0.
pub fn round_up_pow2(x: f64) -> Result<f64, MetricError> {
    if x.is_nan() || x < 0.0 {
        return Err(MetricError::Negative(x));
    }
    Ok(pow2_ceil(x))
}

pub(crate) fn pow2_ceil(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let mut p = 2f64.powi(x.log2().floor() as i32);
    while p < x {
        p *= 2.0;
    }
    while p / 2.0 >= x {
        p /= 2.0;
    }
    p
}

/// Exponent e with 2^e = p for an exact power of two.
pub(crate) fn pow2_exponent(p: f64) -> i32 {
    p.log2().round() as i32
}

#[inline]
pub(crate) fn powered(value: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        value
    } else {
        value.powf(alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: PointId,
    pub radius: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BallSolution {
    pub balls: Vec<Ball>,
    pub outliers: Vec<PointId>,
}

impl BallSolution {
    /// Σ radius^α.
    pub fn cost(&self, alpha: f64) -> f64 {
        self.balls.iter().map(|b| powered(b.radius, alpha)).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.balls.iter().map(|b| b.radius).fold(0.0, f64::max)
    }

    /// Points not inside any ball.
    pub fn uncovered(&self, space: &MetricSpace) -> Vec<PointId> {
        (0..space.len())
            .filter(|&p| !self.balls.iter().any(|b| space.distance(b.center, p) <= b.radius))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: Vec<PointId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<f64>,
}

impl Cluster {
    pub fn new(mut members: Vec<PointId>) -> Self {
        members.sort_unstable();
        Cluster { members, tag: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PartitionSolution {
    pub clusters: Vec<Cluster>,
    pub outliers: Vec<PointId>,
}

impl PartitionSolution {
    /// Σ diam(C)^α.
    pub fn cost(&self, space: &MetricSpace, alpha: f64) -> f64 {
        self.clusters.iter().map(|c| powered(space.diam_unchecked(&c.members), alpha)).sum()
    }

    pub fn member_lists(&self) -> Vec<Vec<PointId>> {
        self.clusters.iter().map(|c| c.members.clone()).collect()
    }
}
