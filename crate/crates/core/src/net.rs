//! Nested net hierarchies and the budgeted nets derived from them.
//!
//! Level 0 holds every point of the subset at the base scale, the largest
//! power of two not exceeding the minimum inter-point distance. Each further
//! level doubles the scale and keeps a greedy net of the level below.

use std::collections::HashMap;

use thiserror::Error;

use crate::metric::{pow2_ceil, pow2_exponent, Ball, BallSolution, Cluster, MetricSpace, PartitionSolution, PointId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("point {0} is not a net point of this view")]
    NotNetPoint(PointId),
    #[error("point {0} is left uncovered after extension")]
    Uncovered(PointId),
}

#[derive(Debug, Clone)]
pub struct NetLevel {
    pub scale: f64,
    /// Net points in ascending id order.
    pub members: Vec<PointId>,
    /// Parent in this level of every member of the level below.
    pub parent: HashMap<PointId, PointId>,
}

#[derive(Debug, Clone)]
pub struct NetHierarchy {
    points: Vec<PointId>,
    base_exp: i32,
    levels: Vec<NetLevel>,
    /// `rep[l][i]`: representative at level `l` of `points[i]`.
    rep: Vec<Vec<PointId>>,
}

/// Builds the hierarchy over `subset` (any order; duplicates ignored).
pub fn build_hierarchy(space: &MetricSpace, subset: &[PointId]) -> NetHierarchy {
    let mut points = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    assert!(!points.is_empty(), "hierarchy over an empty subset");

    let mut min_d = f64::INFINITY;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            min_d = min_d.min(space.distance(a, b));
        }
    }
    let base_exp = if min_d.is_finite() {
        let p = pow2_ceil(min_d);
        let e = pow2_exponent(p);
        if p > min_d {
            e - 1
        } else {
            e
        }
    } else {
        0
    };

    let mut levels = vec![NetLevel {
        scale: 2f64.powi(base_exp),
        members: points.clone(),
        parent: HashMap::new(),
    }];
    let mut rep = vec![points.clone()];

    while levels.last().unwrap().members.len() > 1 {
        let below = levels.last().unwrap();
        let scale = below.scale * 2.0;
        let mut members: Vec<PointId> = Vec::new();
        for &p in &below.members {
            if members.iter().all(|&m| space.distance(m, p) >= scale) {
                members.push(p);
            }
        }
        let mut parent = HashMap::new();
        for &p in &below.members {
            let mut best = members[0];
            for &m in &members[1..] {
                if space.distance(m, p) < space.distance(best, p) {
                    best = m;
                }
            }
            parent.insert(p, best);
        }
        let next_rep: Vec<PointId> = rep.last().unwrap().iter().map(|r| parent[r]).collect();
        rep.push(next_rep);
        levels.push(NetLevel { scale, members, parent });
    }
    NetHierarchy { points, base_exp, levels, rep }
}

impl NetHierarchy {
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn levels(&self) -> &[NetLevel] {
        &self.levels
    }

    pub fn base_scale(&self) -> f64 {
        2f64.powi(self.base_exp)
    }

    fn level_for_spacing(&self, spacing: f64) -> Option<usize> {
        if spacing <= 0.0 {
            return None;
        }
        let e = pow2_exponent(spacing);
        if e <= self.base_exp {
            None
        } else {
            Some(((e - self.base_exp) as usize).min(self.levels.len() - 1))
        }
    }

    /// Net view for spacing 2^⌈log₂(εT/k)⌉.
    pub fn net_for_budget(&self, space: &MetricSpace, budget: f64, k: usize, eps: f64) -> NetView {
        let spacing = pow2_ceil(eps * budget / k as f64);
        self.view_at(space, budget, spacing)
    }

    /// Net view at an explicit power-of-two spacing.
    pub fn view_at(&self, space: &MetricSpace, budget: f64, spacing: f64) -> NetView {
        let Some(level) = self.level_for_spacing(spacing) else {
            return NetView {
                budget,
                spacing,
                pad: 0.0,
                net: self.points.clone(),
                tau: self.points.iter().map(|&p| vec![p]).collect(),
            };
        };
        let members = self.levels[level].members.clone();
        let slot: HashMap<PointId, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut tau = vec![Vec::new(); members.len()];
        let mut reach = 0.0f64;
        for (i, &p) in self.points.iter().enumerate() {
            let r = self.rep[level][i];
            tau[slot[&r]].push(p);
            reach = reach.max(space.distance(p, r));
        }
        let pad = if reach <= spacing { spacing } else { 2.0 * spacing };
        NetView { budget, spacing, pad, net: members, tau }
    }

    /// Representative of `p` at level `level`.
    pub fn representative(&self, level: usize, p: PointId) -> Option<PointId> {
        let i = self.points.binary_search(&p).ok()?;
        self.rep.get(level).map(|r| r[i])
    }
}

/// A net of one component at a given budget, with preimage sets.
#[derive(Debug, Clone)]
pub struct NetView {
    pub budget: f64,
    pub spacing: f64,
    /// Upper bound on the distance from any point to its net representative:
    /// 0 for the identity view, otherwise `spacing` or `2·spacing`.
    pub pad: f64,
    net: Vec<PointId>,
    tau: Vec<Vec<PointId>>,
}

impl NetView {
    pub fn net(&self) -> &[PointId] {
        &self.net
    }

    pub fn is_identity(&self) -> bool {
        self.pad == 0.0
    }

    /// Preimage set of a net point.
    pub fn tau(&self, x: PointId) -> Option<&[PointId]> {
        self.net.binary_search(&x).ok().map(|i| self.tau[i].as_slice())
    }

    pub(crate) fn tau_sizes(&self) -> Vec<usize> {
        self.tau.iter().map(Vec::len).collect()
    }

    pub fn component(&self) -> Vec<PointId> {
        let mut all: Vec<PointId> = self.tau.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    fn check(&self, p: PointId) -> Result<&[PointId], NetError> {
        self.tau(p).ok_or(NetError::NotNetPoint(p))
    }

    /// Grows every ball by `pad`, so each one covers the preimages of the net
    /// points it covered. Component points left uncovered become outliers;
    /// they must all come from outlier net points.
    pub fn extend_balls(&self, space: &MetricSpace, sol: &BallSolution) -> Result<BallSolution, NetError> {
        // The radius also reaches every claimed preimage explicitly, which
        // only matters when rounding makes r + pad fall an ulp short.
        let balls: Vec<Ball> = sol
            .balls
            .iter()
            .map(|b| {
                self.check(b.center)?;
                let mut radius = b.radius + self.pad;
                for (i, &y) in self.net.iter().enumerate() {
                    if space.distance(b.center, y) <= b.radius {
                        for &p in &self.tau[i] {
                            radius = radius.max(space.distance(b.center, p));
                        }
                    }
                }
                Ok(Ball { center: b.center, radius })
            })
            .collect::<Result<_, NetError>>()?;
        let mut allowed = Vec::new();
        for &o in &sol.outliers {
            allowed.extend_from_slice(self.check(o)?);
        }
        allowed.sort_unstable();
        let mut outliers = Vec::new();
        for p in self.component() {
            if !balls.iter().any(|b| space.distance(b.center, p) <= b.radius) {
                if allowed.binary_search(&p).is_err() {
                    return Err(NetError::Uncovered(p));
                }
                outliers.push(p);
            }
        }
        Ok(BallSolution { balls, outliers })
    }

    /// Replaces every cluster and outlier by the union of preimages.
    pub fn extend_partition(&self, sol: &PartitionSolution) -> Result<PartitionSolution, NetError> {
        let lift = |members: &[PointId]| -> Result<Vec<PointId>, NetError> {
            let mut out = Vec::new();
            for &m in members {
                out.extend_from_slice(self.check(m)?);
            }
            out.sort_unstable();
            Ok(out)
        };
        let clusters = sol
            .clusters
            .iter()
            .map(|c| Ok(Cluster::new(lift(&c.members)?)))
            .collect::<Result<_, NetError>>()?;
        Ok(PartitionSolution { clusters, outliers: lift(&sol.outliers)? })
    }
}
