//! Exhaustive min-sum-diameters through ordered witness enumeration.

use std::collections::HashSet;

use crate::bits::Bits;

use crate::error::{check_k, SolveError};
use crate::local::Local;
use crate::metric::{Cluster, MetricSpace, PartitionSolution, PointId};
use crate::variants::ClusterConstraint;

struct Walk<'a> {
    local: Local,
    dists: Vec<f64>,
    q: usize,
    constraint: Option<&'a dyn ClusterConstraint>,
    chosen: Vec<Bits>,
    best: Option<(f64, Vec<Bits>)>,
}

impl Walk<'_> {
    fn accepts(&self, set: &Bits) -> bool {
        self.constraint.is_none_or(|c| c.accepts(&self.local.globals(set)))
    }

    fn beaten(&self, cost: f64) -> bool {
        self.best.as_ref().is_some_and(|b| cost >= b.0)
    }

    /// Clusters are built in order of non-decreasing diameter bound; the
    /// last one takes every remaining point.
    fn go(&mut self, level: usize, rest: Bits, lo: usize, cost: f64) {
        if rest.is_clear() {
            return;
        }
        if level + 1 == self.q {
            let total = cost + self.local.diam(&rest);
            if self.beaten(total) || !self.accepts(&rest) || !self.chosen.iter().all(|c| self.accepts(c)) {
                return;
            }
            let mut all = self.chosen.clone();
            all.push(rest);
            self.best = Some((total, all));
            return;
        }
        let cap = (self.q - 1 - level).clamp(1, 4);
        let members: Vec<usize> = rest.ones().collect();
        let mut seen: HashSet<Bits> = HashSet::new();
        for di in lo..self.dists.len() {
            let bound = self.dists[di];
            let balls: Vec<Bits> = members
                .iter()
                .map(|&w| {
                    let mut b = self.local.ball(w, bound);
                    b.intersect_with(&rest);
                    b
                })
                .collect();
            let mut found: Vec<Bits> = Vec::new();
            let mut pick = Vec::new();
            self.witnesses(&members, &balls, bound, cap, 0, &mut pick, &mut found);
            for v in found {
                if v == rest || !seen.insert(v.clone()) {
                    continue;
                }
                let next = cost + self.local.diam(&v);
                if self.beaten(next) {
                    continue;
                }
                let mut left = rest.clone();
                left.difference_with(&v);
                self.chosen.push(v);
                self.go(level + 1, left, di, next);
                self.chosen.pop();
            }
        }
    }

    /// Points within `bound` of every witness, for witness sets of pairwise
    /// distance ≤ bound, keeping those of diameter ≤ bound.
    #[allow(clippy::too_many_arguments)]
    fn witnesses(
        &self,
        members: &[usize],
        balls: &[Bits],
        bound: f64,
        cap: usize,
        from: usize,
        pick: &mut Vec<usize>,
        found: &mut Vec<Bits>,
    ) {
        for i in from..members.len() {
            if pick.iter().any(|&j| self.local.d(members[j], members[i]) > bound) {
                continue;
            }
            pick.push(i);
            let mut v = balls[pick[0]].clone();
            for &j in &pick[1..] {
                v.intersect_with(&balls[j]);
            }
            if self.local.diam(&v) <= bound {
                found.push(v);
            }
            if pick.len() < cap {
                self.witnesses(members, balls, bound, cap, i + 1, pick, found);
            }
            pick.pop();
        }
    }
}

/// Optimal partition into at most `k` clusters minimizing the sum of
/// diameters; every cluster must pass `constraint` when one is given.
pub fn exact_msd(
    space: &MetricSpace,
    k: usize,
    constraint: Option<&dyn ClusterConstraint>,
) -> Result<PartitionSolution, SolveError> {
    check_k(k)?;
    let n = space.len();
    let ids: Vec<PointId> = (0..n).collect();
    if n <= k && constraint.is_none() {
        return Ok(PartitionSolution { clusters: ids.iter().map(|&p| Cluster::new(vec![p])).collect(), outliers: vec![] });
    }
    let local = Local::unit(space, ids);
    let dists = local.distinct_distances();
    let mut walk = Walk { local, dists, q: 1, constraint, chosen: Vec::new(), best: None };
    for q in 1..=k.min(n) {
        walk.q = q;
        let full = walk.local.full_set();
        walk.go(0, full, 0, 0.0);
    }
    let Some((_, sets)) = walk.best else {
        return Err(SolveError::Infeasible("no partition satisfies the cluster constraint".into()));
    };
    Ok(PartitionSolution {
        clusters: sets.iter().map(|s| Cluster::new(walk.local.globals(s))).collect(),
        outliers: vec![],
    })
}
