//! Shared plumbing for the budget-guessing solvers: ladders, task fan-out and
//! per-component tables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::metric::{pow2_ceil, Ball, BallSolution, Cluster, PartitionSolution, PointId};
use crate::tables::{CostTable, MergePlan};

/// The user-facing ε is divided by this before sizing nets.
pub const CALIBRATION: f64 = 8.0;

/// How one component contributed to a merged solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub points: Vec<PointId>,
    pub clusters: usize,
    pub outliers: usize,
    pub cost: f64,
}

/// Powers of two from ⟦lower⟧ up to `top`; never empty.
pub(crate) fn budget_ladder(lower: f64, top: f64) -> Vec<f64> {
    let mut t = pow2_ceil(lower);
    let mut out = vec![t];
    while t * 2.0 <= top {
        t *= 2.0;
        out.push(t);
    }
    out
}

/// Powers of two from `spacing` up to `cap`; `[spacing]` if `cap` is smaller.
pub(crate) fn radius_ladder(spacing: f64, cap: f64) -> Vec<f64> {
    let mut out = vec![spacing];
    let mut r = spacing;
    while r * 2.0 <= cap {
        r *= 2.0;
        out.push(r);
    }
    out
}

/// Zero-radius balls on the first `k` points; the rest are outliers.
pub(crate) fn zero_balls(points: &[PointId], k: usize) -> BallSolution {
    let cut = k.min(points.len());
    BallSolution {
        balls: points[..cut].iter().map(|&center| Ball { center, radius: 0.0 }).collect(),
        outliers: points[cut..].to_vec(),
    }
}

pub(crate) fn zero_partition(points: &[PointId], k: usize) -> PartitionSolution {
    let cut = k.min(points.len());
    PartitionSolution {
        clusters: points[..cut].iter().map(|&p| Cluster::new(vec![p])).collect(),
        outliers: points[cut..].to_vec(),
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Task {
    pub comp: usize,
    pub clusters: usize,
    pub outliers: usize,
    pub budget: f64,
}

/// One task per component, cluster count, outlier count and budget, with the
/// budgets innermost and ascending.
pub(crate) fn plan_tasks(comps: &[Vec<PointId>], k: usize, g: usize, budgets: &[f64]) -> Vec<Task> {
    let mut tasks = Vec::new();
    for (comp, points) in comps.iter().enumerate() {
        for clusters in 1..=k.min(points.len()) {
            for outliers in 0..=g.min(points.len()) {
                for &budget in budgets {
                    tasks.push(Task { comp, clusters, outliers, budget });
                }
            }
        }
    }
    tasks
}

/// Runs every task in parallel; results come back in task order.
pub(crate) fn run_tasks<P, F>(tasks: &[Task], run: F) -> Result<Vec<Option<(f64, P)>>, SolveError>
where
    P: Send,
    F: Fn(&Task) -> Result<Option<(f64, P)>, SolveError> + Sync,
{
    tasks.par_iter().map(&run).collect()
}

/// Like [`run_tasks`], but walks each (component, clusters, outliers) ladder
/// in ascending budget order and skips budgets above ⟦best cost so far⟧: the
/// optimum's rounded cost is no larger, so its budget has already been tried.
/// Each run is told the best cost so far and may report `None` when it cannot
/// beat it; skipped tasks report `None` too. Only sound when cost and budget
/// share units.
pub(crate) fn run_ladders<P, F>(tasks: &[Task], run: F) -> Result<Vec<Option<(f64, P)>>, SolveError>
where
    P: Send,
    F: Fn(&Task, f64) -> Result<Option<(f64, P)>, SolveError> + Sync,
{
    let mut groups: Vec<&[Task]> = Vec::new();
    let mut start = 0;
    for i in 1..=tasks.len() {
        let same = i < tasks.len() && {
            let (a, b) = (&tasks[i - 1], &tasks[i]);
            (a.comp, a.clusters, a.outliers) == (b.comp, b.clusters, b.outliers)
        };
        if !same {
            groups.push(&tasks[start..i]);
            start = i;
        }
    }
    let per_group: Vec<Vec<Option<(f64, P)>>> = groups
        .par_iter()
        .map(|group| {
            let mut out = Vec::with_capacity(group.len());
            let mut best = f64::INFINITY;
            for task in group.iter() {
                if task.budget > pow2_ceil(best) {
                    out.push(None);
                    continue;
                }
                let result = run(task, best)?;
                if let Some((cost, _)) = &result {
                    best = best.min(*cost);
                }
                out.push(result);
            }
            Ok(out)
        })
        .collect::<Result<_, SolveError>>()?;
    Ok(per_group.into_iter().flatten().collect())
}

pub(crate) struct Tabled<P> {
    pub tables: Vec<CostTable>,
    payloads: Vec<BTreeMap<(usize, usize), P>>,
}

/// Keeps the cheapest result per (component, clusters, outliers); the first
/// one wins ties. Components small enough to drop entirely get a free entry.
pub(crate) fn tabulate<P: Clone>(
    comps: &[Vec<PointId>],
    tasks: &[Task],
    results: Vec<Option<(f64, P)>>,
    g: usize,
    dropped: impl Fn(&[PointId]) -> P,
) -> Tabled<P> {
    let mut best: Vec<BTreeMap<(usize, usize), (f64, P)>> = vec![BTreeMap::new(); comps.len()];
    for (task, result) in tasks.iter().zip(results) {
        let Some((cost, payload)) = result else { continue };
        let slot = &mut best[task.comp];
        let key = (task.clusters, task.outliers);
        if slot.get(&key).is_none_or(|(c, _)| cost < *c) {
            slot.insert(key, (cost, payload));
        }
    }
    for (i, points) in comps.iter().enumerate() {
        if points.len() <= g {
            best[i].insert((0, points.len()), (0.0, dropped(points)));
        }
    }
    let mut tables = Vec::with_capacity(comps.len());
    let mut payloads = Vec::with_capacity(comps.len());
    for slot in best {
        let mut table = CostTable::new();
        let mut pay = BTreeMap::new();
        for ((q, o), (cost, p)) in slot {
            table.insert(q, o, cost);
            pay.insert((q, o), p);
        }
        tables.push(table);
        payloads.push(pay);
    }
    Tabled { tables, payloads }
}

impl<P: Clone> Tabled<P> {
    pub fn picked(&self, plan: &MergePlan) -> Vec<P> {
        plan.picks.iter().zip(&self.payloads).map(|(key, pay)| pay[key].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        assert_eq!(budget_ladder(3.0, 20.0), vec![4.0, 8.0, 16.0]);
        assert_eq!(budget_ladder(3.0, 2.0), vec![4.0]);
        assert_eq!(radius_ladder(0.5, 2.0), vec![0.5, 1.0, 2.0]);
        assert_eq!(radius_ladder(4.0, 1.0), vec![4.0]);
    }

    #[test]
    fn zero_solutions() {
        let z = zero_balls(&[3, 5, 7], 2);
        assert_eq!(z.balls.len(), 2);
        assert_eq!(z.outliers, vec![7]);
        assert_eq!(zero_partition(&[1], 4).clusters.len(), 1);
    }
}
