//! Exhaustive reference solvers for tiny instances.
//!
//! Nothing here calls into the solver modules; only the metric and the
//! constraint types are shared.

use thiserror::Error;

use crate::metric::{Ball, BallSolution, Cluster, MetricSpace, PartitionSolution, PointId};
use crate::variants::{ClusterConstraint, FairSpec};

pub const MSR_MAX_POINTS: usize = 12;
pub const MSD_MAX_POINTS: usize = 10;
pub const MSD_MAX_CLUSTERS: usize = 4;
pub const KCENTER_MAX_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone)]
pub struct OracleBalls {
    pub cost: f64,
    pub solution: BallSolution,
}

#[derive(Debug, Clone)]
pub struct OraclePartition {
    pub cost: f64,
    pub solution: PartitionSolution,
}

fn pow(x: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        x
    } else {
        x.powf(alpha)
    }
}

/// Optimal min-sum-radii with `g` outliers and radii raised to `alpha`,
/// optionally with per-color caps on the centers. `Ok(None)` means the caps
/// admit no solution.
pub fn oracle_msr(
    space: &MetricSpace,
    k: usize,
    g: usize,
    alpha: f64,
    fair: Option<&FairSpec>,
) -> Result<Option<OracleBalls>, OracleError> {
    let n = space.len();
    if n > MSR_MAX_POINTS {
        return Err(OracleError::TooLarge(format!("{n} points > {MSR_MAX_POINTS}")));
    }
    let mut best: Option<OracleBalls> = None;
    for mask in 0u32..(1 << n) {
        let centers: Vec<PointId> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if centers.len() > k {
            continue;
        }
        if let Some(f) = fair {
            let mut used = vec![0usize; f.caps.len()];
            for &c in &centers {
                used[f.colors[c]] += 1;
            }
            if used.iter().zip(&f.caps).any(|(u, c)| u > c) {
                continue;
            }
        }
        let options: Vec<Vec<f64>> = centers
            .iter()
            .map(|&c| {
                let mut v: Vec<f64> = (0..n).map(|y| space.distance(c, y)).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            })
            .collect();
        let mut pick = vec![0usize; centers.len()];
        loop {
            let radii: Vec<f64> = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            let uncovered: Vec<PointId> = (0..n)
                .filter(|&p| !centers.iter().zip(&radii).any(|(&c, &r)| space.distance(c, p) <= r))
                .collect();
            if uncovered.len() <= g {
                let cost: f64 = radii.iter().map(|&r| pow(r, alpha)).sum();
                if best.as_ref().is_none_or(|b| cost < b.cost) {
                    let balls = centers.iter().zip(&radii).map(|(&center, &radius)| Ball { center, radius }).collect();
                    best = Some(OracleBalls { cost, solution: BallSolution { balls, outliers: uncovered } });
                }
            }
            // odometer
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    Ok(best)
}

/// Optimal min-sum-diameters with `g` outliers and diameters raised to
/// `alpha`; every cluster must satisfy `constraint` when one is given.
/// `Ok(None)` means no partition satisfies the constraint.
pub fn oracle_msd(
    space: &MetricSpace,
    k: usize,
    g: usize,
    alpha: f64,
    constraint: Option<&dyn ClusterConstraint>,
) -> Result<Option<OraclePartition>, OracleError> {
    let n = space.len();
    if n > MSD_MAX_POINTS || k > MSD_MAX_CLUSTERS {
        return Err(OracleError::TooLarge(format!(
            "n = {n}, k = {k} (limits {MSD_MAX_POINTS}, {MSD_MAX_CLUSTERS})"
        )));
    }
    struct Walk<'a> {
        space: &'a MetricSpace,
        k: usize,
        g: usize,
        alpha: f64,
        constraint: Option<&'a dyn ClusterConstraint>,
        groups: Vec<Vec<PointId>>,
        diam: Vec<f64>,
        outliers: Vec<PointId>,
        best: Option<OraclePartition>,
    }
    impl Walk<'_> {
        fn go(&mut self, p: PointId) {
            if p == self.space.len() {
                if let Some(c) = self.constraint {
                    if !self.groups.iter().all(|m| c.accepts(m)) {
                        return;
                    }
                }
                let cost: f64 = self.diam.iter().map(|&d| pow(d, self.alpha)).sum();
                if self.best.as_ref().is_none_or(|b| cost < b.cost) {
                    let clusters = self.groups.iter().map(|m| Cluster::new(m.clone())).collect();
                    self.best = Some(OraclePartition {
                        cost,
                        solution: PartitionSolution { clusters, outliers: self.outliers.clone() },
                    });
                }
                return;
            }
            for j in 0..self.groups.len() {
                let old = self.diam[j];
                let reach = self.groups[j].iter().map(|&q| self.space.distance(p, q)).fold(0.0, f64::max);
                self.diam[j] = old.max(reach);
                self.groups[j].push(p);
                self.go(p + 1);
                self.groups[j].pop();
                self.diam[j] = old;
            }
            if self.groups.len() < self.k {
                self.groups.push(vec![p]);
                self.diam.push(0.0);
                self.go(p + 1);
                self.groups.pop();
                self.diam.pop();
            }
            if self.outliers.len() < self.g {
                self.outliers.push(p);
                self.go(p + 1);
                self.outliers.pop();
            }
        }
    }
    let mut walk = Walk {
        space,
        k,
        g,
        alpha,
        constraint,
        groups: Vec::new(),
        diam: Vec::new(),
        outliers: Vec::new(),
        best: None,
    };
    walk.go(0);
    Ok(walk.best)
}

/// Optimal k-center radius over centers drawn from the points.
pub fn oracle_kcenter(space: &MetricSpace, k: usize) -> Result<OracleBalls, OracleError> {
    let n = space.len();
    if n > KCENTER_MAX_POINTS {
        return Err(OracleError::TooLarge(format!("{n} points > {KCENTER_MAX_POINTS}")));
    }
    let want = k.min(n);
    let mut best: Option<OracleBalls> = None;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize != want {
            continue;
        }
        let centers: Vec<PointId> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut radius = vec![0.0f64; centers.len()];
        for p in 0..n {
            let (j, d) = centers
                .iter()
                .enumerate()
                .map(|(j, &c)| (j, space.distance(c, p)))
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            radius[j] = radius[j].max(d);
        }
        let cost = radius.iter().copied().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            let balls = centers.iter().zip(&radius).map(|(&center, &radius)| Ball { center, radius }).collect();
            best = Some(OracleBalls { cost, solution: BallSolution { balls, outliers: vec![] } });
        }
    }
    Ok(best.expect("at least one center subset"))
}
